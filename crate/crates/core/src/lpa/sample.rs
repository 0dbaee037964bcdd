//! Seeded random elements for property tests and experiments.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{LeavittAlgebra, LpaElement, Monomial};
use crate::quiver::{Path, Quiver, VertexId};
use crate::scalar::GaussianRational;

#[derive(Clone, Copy, Debug)]
pub struct SampleOptions {
    pub max_support: usize,
    pub max_len: usize,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions { max_support: 6, max_len: 3 }
    }
}

const GRID: [(i64, i64); 7] = [(-2, 1), (-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1), (2, 1)];

/// Uniform over the grid `{-2, -1, -1/2, 0, 1/2, 1, 2}²` minus zero.
pub fn random_coefficient<R: Rng + ?Sized>(rng: &mut R) -> GaussianRational {
    loop {
        let re = GRID[rng.gen_range(0..GRID.len())];
        let im = GRID[rng.gen_range(0..GRID.len())];
        let c = GaussianRational::from_parts(re, im);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Uniformly chosen path of length `len` ending at `v`, if one exists.
pub fn random_path_into<R: Rng + ?Sized>(q: &Quiver, v: VertexId, len: usize, rng: &mut R) -> Option<Path> {
    q.paths_of_length(len, None, Some(v)).choose(rng).cloned()
}

pub fn random_monomial<R: Rng + ?Sized>(q: &Quiver, max_len: usize, rng: &mut R) -> Monomial {
    let vertices: Vec<VertexId> = q.vertices().collect();
    loop {
        let v = *vertices.choose(rng).expect("graph has vertices");
        let a = random_path_into(q, v, rng.gen_range(0..=max_len), rng);
        let b = random_path_into(q, v, rng.gen_range(0..=max_len), rng);
        if let (Some(a), Some(b)) = (a, b) {
            return Monomial::new(a, b).expect("common range");
        }
    }
}

/// A nonzero element with at most `max_support` raw terms.
pub fn random_element<R: Rng + ?Sized>(alg: &LeavittAlgebra, opts: SampleOptions, rng: &mut R) -> LpaElement {
    loop {
        let k = rng.gen_range(1..=opts.max_support.max(1));
        let raw: Vec<_> =
            (0..k).map(|_| (random_monomial(alg.quiver(), opts.max_len, rng), random_coefficient(rng))).collect();
        let x = alg.normal_form(raw);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A nonzero element of `(L_Q)_{0,n}`: terms `αβ*` with `|α| = |β| ≤ n`.
pub fn random_degree_zero<R: Rng + ?Sized>(
    alg: &LeavittAlgebra,
    n: usize,
    max_support: usize,
    rng: &mut R,
) -> LpaElement {
    let q = alg.quiver();
    let vertices: Vec<VertexId> = q.vertices().collect();
    loop {
        let k = rng.gen_range(1..=max_support.max(1));
        let mut raw = Vec::with_capacity(k);
        while raw.len() < k {
            let v = *vertices.choose(rng).expect("graph has vertices");
            let len = rng.gen_range(0..=n);
            let paths = q.paths_of_length(len, None, Some(v));
            if paths.is_empty() {
                continue;
            }
            let a = paths.choose(rng).expect("nonempty").clone();
            let b = paths.choose(rng).expect("nonempty").clone();
            raw.push((Monomial::new(a, b).expect("common range"), random_coefficient(rng)));
        }
        let x = alg.normal_form(raw);
        if !x.is_zero() {
            return x;
        }
    }
}
