//! Norm-based spatiality checks and orthogonal families of isometries.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{certify, Representation};
use crate::error::{Error, Result};
use crate::lpa::{sample::random_degree_zero, LeavittAlgebra, LpaElement};
use crate::spatial::{block_sup_norm, is_spatial_partial_isometry, opnorm_p, CMatrix, NormOptions, SpatialMatrix};

#[derive(Clone, Debug)]
pub struct CriterionOptions {
    /// Random elements of `(L_Q)_{0,1}` on top of the vertices and `ee*`.
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub norm: NormOptions,
}

impl Default for CriterionOptions {
    fn default() -> Self {
        CriterionOptions { samples: 12, seed: 0, tol: 1e-7, norm: NormOptions::default() }
    }
}

/// `lhs`: every generator image is a spatial partial isometry.
/// `rhs`: no certified violation of contractivity was found, on the edge
/// images, their reverses, or the sampled elements of `(L_Q)_{0,1}`.
#[derive(Clone, Debug, Serialize)]
pub struct SpatialityVerdict {
    pub p: f64,
    pub lhs: bool,
    pub rhs: bool,
    pub refuted_by: Option<String>,
    pub checked: usize,
    /// Checks whose intervals could neither confirm nor refute the bound.
    pub inconclusive: usize,
}

pub fn spatiality_criterion(rep: &Representation, p: f64, opts: &CriterionOptions) -> Result<SpatialityVerdict> {
    if !rep.is_nondegenerate() {
        return Err(Error::Degenerate("the spatiality criterion needs a nondegenerate representation".into()));
    }
    let q = rep.quiver();
    let space = rep.space();
    let lhs = rep.generators().iter().all(|(_, m)| is_spatial_partial_isometry(&m.matrix, p, space).is_some());
    let slack = 1.0 + opts.tol;
    let mut checked = 0;
    let mut inconclusive = 0;
    let mut refuted_by = None;
    for e in q.edge_ids() {
        for (name, m) in [
            (q.edge_name(e).to_string(), &rep.edge_image(e).matrix),
            (format!("{}*", q.edge_name(e)), &rep.ghost_image(e).matrix),
        ] {
            let b = opnorm_p(m, p, Some(space), &opts.norm)?;
            checked += 1;
            if b.lower > slack {
                refuted_by.get_or_insert(format!("‖ρ({name})‖ ≥ {}", b.lower));
            } else if b.upper > slack {
                inconclusive += 1;
            }
        }
    }
    let alg = LeavittAlgebra::new(q.clone());
    let mut xs: Vec<LpaElement> = q.vertices().map(|v| alg.vertex(v)).collect();
    for e in q.edge_ids() {
        xs.push(alg.mul(&alg.edge(e), &alg.ghost_edge(e)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.samples {
        xs.push(random_degree_zero(&alg, 1, 4, &mut rng));
    }
    for x in &xs {
        let blocks: Vec<CMatrix> = alg
            .block_decompose_0n(x, 1)?
            .values()
            .map(|b| CMatrix::from_dense_rows(&b.to_complex_rows()))
            .collect::<Result<_>>()?;
        let target = block_sup_norm(blocks.iter(), p, &opts.norm)?;
        let b = opnorm_p(&rep.evaluate(x), p, Some(space), &opts.norm)?;
        checked += 1;
        if b.lower > target.upper * slack {
            refuted_by.get_or_insert(format!("‖ρ({})‖ ≥ {} > {}", alg.format(x), b.lower, target.upper));
        } else if b.upper > target.lower * slack {
            inconclusive += 1;
        }
    }
    Ok(SpatialityVerdict { p, lhs, rhs: refuted_by.is_none(), refuted_by, checked, inconclusive })
}

fn support(m: &CMatrix) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let mut dom = BTreeSet::new();
    let mut ran = BTreeSet::new();
    for (i, j, _) in m.entries() {
        ran.insert(i);
        dom.insert(j);
    }
    (dom, ran)
}

/// Finds `count` pairwise orthogonal spatial partial isometries among the
/// images of monomials `αβ*` with `|α|, |β| ≤ max_len`: domains pairwise
/// disjoint and ranges pairwise disjoint. Non-idempotent monomials are
/// preferred.
pub fn harvest_orthogonal_isometries(
    rep: &Representation,
    count: usize,
    max_len: usize,
) -> Result<Vec<(String, SpatialMatrix)>> {
    let q = rep.quiver();
    let alg = LeavittAlgebra::new(q.clone());
    let mut candidates = Vec::new();
    for m in alg.basis_monomials(max_len) {
        let img = rep.off_mask(&rep.monomial_image(&m));
        if img.is_zero() {
            continue;
        }
        let sm = certify(img, rep.p(), rep.space());
        if sm.is_certified() {
            let (dom, ran) = support(&sm.matrix);
            candidates.push((m.is_idempotent(), m.display(q), sm, dom, ran));
        }
    }
    candidates.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let mut chosen: Vec<usize> = Vec::new();
    let mut budget = 200_000usize;
    type Candidate = (bool, String, SpatialMatrix, BTreeSet<usize>, BTreeSet<usize>);
    fn search(c: &[Candidate], start: usize, count: usize, chosen: &mut Vec<usize>, budget: &mut usize) -> bool {
        if chosen.len() == count {
            return true;
        }
        for k in start..c.len() {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            let ok = chosen.iter().all(|&j| c[j].3.is_disjoint(&c[k].3) && c[j].4.is_disjoint(&c[k].4));
            if ok {
                chosen.push(k);
                if search(c, k + 1, count, chosen, budget) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    if !search(&candidates, 0, count, &mut chosen, &mut budget) {
        return Err(Error::precondition(format!("no {count} orthogonal spatial isometries found")));
    }
    Ok(chosen.into_iter().map(|k| (candidates[k].1.clone(), candidates[k].2.clone())).collect())
}

/// Two isolated vertices acting on `ℓ^p({0,1})` by the rotated projections
/// `½[[1,1],[1,1]]` and `½[[1,-1],[-1,1]]`. A nondegenerate representation
/// that is contractive at `p = 2` but not spatial, and not contractive for
/// any other `p`.
pub fn rotated_projections_rep(p: f64) -> Result<Representation> {
    use super::{AtomLabel, Images};
    use crate::quiver::Quiver;
    use crate::spatial::FiniteMeasureSpace;
    use num_complex::Complex64;

    let q = Quiver::build(&["u", "v"], &[])?;
    let half = Complex64::new(0.5, 0.0);
    let pu = CMatrix::from_triplets(2, 2, [(0, 0, half), (0, 1, half), (1, 0, half), (1, 1, half)]);
    let pv = CMatrix::from_triplets(2, 2, [(0, 0, half), (0, 1, -half), (1, 0, -half), (1, 1, half)]);
    let space = FiniteMeasureSpace::counting(["0", "1"])?;
    let images =
        Images { vertices: vec![certify(pu, p, &space), certify(pv, p, &space)], edges: vec![], ghosts: vec![] };
    let labels = vec![AtomLabel::Named("0".into()), AtomLabel::Named("1".into())];
    Representation::new(q, p, space, labels, images, vec![false; 2])
}
