//! Forward Cuntz-Krieger expansion: fixed-level forms and the matrix blocks
//! of the degree-zero part.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use num_traits::Zero;

use super::{LeavittAlgebra, LpaElement};
use crate::error::{Error, Result};
use crate::quiver::{Path, VertexId};
use crate::scalar::GaussianRational;

/// `coeff · αβ*` with `|β|` equal to the requested level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelTerm {
    pub alpha: Path,
    pub beta: Path,
    pub coeff: GaussianRational,
}

/// One matrix summand of `(L_Q)_{0,n}`: rows and columns are the paths of
/// length `level` ending at `vertex`; entry `[α][β]` is the coefficient of `αβ*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub vertex: VertexId,
    pub level: usize,
    pub paths: Vec<Path>,
    pub entries: Vec<Vec<GaussianRational>>,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.paths.len()
    }

    pub fn to_complex_rows(&self) -> Vec<Vec<Complex64>> {
        self.entries.iter().map(|row| row.iter().map(GaussianRational::to_complex).collect()).collect()
    }
}

impl LeavittAlgebra {
    /// Rewrites `x` as `Σ λ αβ*` with every `|β| = n`, using
    /// `αβ* = Σ_{s(e)=r(β)} (αe)(βe)*`. Needs a graph without sinks.
    pub fn expand_to_level(&self, x: &LpaElement, n: usize) -> Result<Vec<LevelTerm>> {
        let q = self.quiver();
        if !self.imposes_ck2() {
            return Err(Error::precondition("level expansion needs the CK2 relation"));
        }
        if let Some(v) = q.vertices().find(|&v| q.is_sink(v)) {
            return Err(Error::precondition(format!(
                "graph has a sink `{}`; level expansion needs every vertex regular",
                q.vertex_name(v)
            )));
        }
        let mut acc: BTreeMap<(Path, Path), GaussianRational> = BTreeMap::new();
        for (m, c) in x.terms() {
            if m.beta().len() > n {
                return Err(Error::precondition(format!("level {n} is below a term with |β| = {}", m.beta().len())));
            }
            let mut stack = vec![(m.alpha().clone(), m.beta().clone())];
            while let Some((a, b)) = stack.pop() {
                if b.len() == n {
                    *acc.entry((a, b)).or_default() += c;
                    continue;
                }
                for &f in q.out_edges(b.dst()) {
                    stack.push((a.extended(q, f), b.extended(q, f)));
                }
            }
        }
        Ok(acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((alpha, beta), coeff)| LevelTerm { alpha, beta, coeff })
            .collect())
    }

    /// Matrix blocks of `x ∈ (L_Q)_{0,n}`, keyed by `(vertex, level)`.
    ///
    /// Terms are pushed forward through regular ranges until they reach
    /// level `n` or stop at a sink. All-zero blocks are omitted.
    pub fn block_decompose_0n(&self, x: &LpaElement, n: usize) -> Result<BTreeMap<(VertexId, usize), Block>> {
        let q = self.quiver();
        if !self.imposes_ck2() {
            return Err(Error::precondition("block decomposition needs the CK2 relation"));
        }
        let mut acc: BTreeMap<(Path, Path), GaussianRational> = BTreeMap::new();
        for (m, c) in x.terms() {
            let (a, b) = (m.alpha(), m.beta());
            if a.len() != b.len() || a.len() > n {
                return Err(Error::precondition(format!(
                    "term {} is not in the degree-zero part up to level {n}",
                    m.display(q)
                )));
            }
            let mut stack = vec![(a.clone(), b.clone())];
            while let Some((a, b)) = stack.pop() {
                let v = a.dst();
                if a.len() == n || q.is_sink(v) {
                    *acc.entry((a, b)).or_default() += c;
                    continue;
                }
                for &f in q.out_edges(v) {
                    stack.push((a.extended(q, f), b.extended(q, f)));
                }
            }
        }
        let mut blocks: BTreeMap<(VertexId, usize), Block> = BTreeMap::new();
        let mut index: HashMap<(VertexId, usize), HashMap<Path, usize>> = HashMap::new();
        for ((a, b), c) in acc {
            if c.is_zero() {
                continue;
            }
            let key = (a.dst(), a.len());
            let block = blocks.entry(key).or_insert_with(|| {
                let paths = q.paths_of_length(key.1, None, Some(key.0));
                let k = paths.len();
                index.insert(key, paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect());
                Block { vertex: key.0, level: key.1, paths, entries: vec![vec![GaussianRational::zero(); k]; k] }
            });
            let idx = &index[&key];
            block.entries[idx[&a]][idx[&b]] = c;
        }
        Ok(blocks)
    }
}
