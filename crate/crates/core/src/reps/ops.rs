//! Operations producing new representations from old ones.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use super::{certify, AtomLabel, Images, Representation};
use crate::error::{Error, Result};
use crate::lpa::Monomial;
use crate::quiver::{AttachmentKind, EdgeId, MoveMap, Path, Quiver, VertexId};
use crate::spatial::{Atom, CMatrix, FiniteMeasureSpace, SpatialMatrix};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn unit(rows: usize, cols: usize, i: usize, j: usize) -> CMatrix {
    CMatrix::from_triplets(rows, cols, [(i, j, ONE)])
}

fn require_nondegenerate(rep: &Representation) -> Result<()> {
    if rep.is_nondegenerate() {
        Ok(())
    } else {
        Err(Error::Degenerate("the vertex images do not sum to the identity".into()))
    }
}

fn certify_all(ms: Vec<CMatrix>, p: f64, space: &FiniteMeasureSpace) -> Vec<SpatialMatrix> {
    ms.into_iter().map(|m| certify(m, p, space)).collect()
}

/// The counting space `{0, .., n - 1}`.
fn index_space(n: usize) -> FiniteMeasureSpace {
    FiniteMeasureSpace::counting((0..n).map(|i| i.to_string())).expect("distinct labels")
}

fn pair_labels(outer: usize, inner: &[AtomLabel]) -> Vec<AtomLabel> {
    (0..outer)
        .flat_map(|i| inner.iter().map(move |l| AtomLabel::Pair { index: i, inner: Box::new(l.clone()) }))
        .collect()
}

fn inner_pair_labels(inner: &[AtomLabel], outer: usize) -> Vec<AtomLabel> {
    inner
        .iter()
        .flat_map(|l| (0..outer).map(move |m| AtomLabel::Pair { index: m, inner: Box::new(l.clone()) }))
        .collect()
}

/// `σ_I` on `I × X`, a representation of `L_{M_n Q}`.
///
/// Base generators go to `E_{0,0} ⊗ σ(x)`; the head vertex `v_i` goes to
/// `E_{i,i} ⊗ σ(v)` and the head edge `f_i: v_i → v_{i-1}` to
/// `E_{i,i-1} ⊗ σ(v)`.
pub fn amplify(rep: &Representation, n: usize) -> Result<Representation> {
    if n == 0 {
        return Err(Error::precondition("amplification needs a nonempty index set"));
    }
    let map = rep.quiver().matrix_graph_with_map(n);
    let mq = &map.quiver;
    let space = index_space(n).product(rep.space());
    let labels = pair_labels(n, rep.labels());
    let mut vertices = vec![CMatrix::zeros(0, 0); mq.vertex_count()];
    let mut edges = vec![CMatrix::zeros(0, 0); mq.edge_count()];
    let mut ghosts = vec![CMatrix::zeros(0, 0); mq.edge_count()];
    for v in rep.quiver().vertices() {
        vertices[v.index()] = unit(n, n, 0, 0).kron(&rep.vertex_image(v).matrix);
    }
    for e in rep.quiver().edge_ids() {
        edges[e.index()] = unit(n, n, 0, 0).kron(&rep.edge_image(e).matrix);
        ghosts[e.index()] = unit(n, n, 0, 0).kron(&rep.ghost_image(e).matrix);
    }
    for a in &map.attachments {
        let pv = &rep.vertex_image(a.vertex).matrix;
        for i in 1..n {
            vertices[a.vertices[i - 1].index()] = unit(n, n, i, i).kron(pv);
            edges[a.edges[i - 1].index()] = unit(n, n, i, i - 1).kron(pv);
            ghosts[a.edges[i - 1].index()] = unit(n, n, i - 1, i).kron(pv);
        }
    }
    let mask = (0..n).flat_map(|_| rep.mask().iter().copied()).collect();
    let p = rep.p();
    let images = Images {
        vertices: certify_all(vertices, p, &space),
        edges: certify_all(edges, p, &space),
        ghosts: certify_all(ghosts, p, &space),
    };
    Representation::new(mq.clone(), p, space, labels, images, mask)
}

/// Result of [`extract_corner`]: `ρ(a) = u·σ_I(a)·u⁻¹` on generators.
#[derive(Clone, Debug)]
pub struct CornerExtraction {
    pub sigma: Representation,
    /// From `I × Y` (the amplified space of `σ`) to the space of `ρ`.
    pub u: CMatrix,
    pub max_deviation: f64,
}

/// The head path `v_i → … → v_0 = v` of the matrix graph.
fn head_path(map: &MoveMap, v: VertexId, i: usize) -> Path {
    if i == 0 {
        return Path::vertex(v);
    }
    let a = map.attachments.iter().find(|a| a.vertex == v).expect("every vertex has a head");
    let edges: Vec<EdgeId> = a.edges[..i].iter().rev().copied().collect();
    Path::from_edges(&map.quiver, &edges).expect("head edges compose")
}

/// Inverse of a matrix with one nonzero per row and column.
fn monomial_inverse(u: &CMatrix) -> Result<CMatrix> {
    let n = u.rows();
    let mut cols = vec![false; n];
    let mut triplets = Vec::with_capacity(n);
    for i in 0..n {
        match u.row(i) {
            [(j, z)] if !cols[*j] => {
                cols[*j] = true;
                triplets.push((*j, i, z.inv()));
            }
            _ => return Err(Error::NotInvertible("conjugating map is not a monomial bijection".into())),
        }
    }
    Ok(CMatrix::from_triplets(n, n, triplets))
}

/// Recovers `σ` with `ρ ≅ σ_I` from a nondegenerate representation of
/// `L_{M_n Q}`, using the corner at index `i0`.
pub fn extract_corner(rep: &Representation, base: &Quiver, n: usize, i0: usize) -> Result<CornerExtraction> {
    if i0 >= n {
        return Err(Error::precondition("corner index out of range"));
    }
    let map = base.matrix_graph_with_map(n);
    if &map.quiver != rep.quiver() {
        return Err(Error::precondition("representation is not over the matrix graph of the base"));
    }
    require_nondegenerate(rep)?;
    let vertex_at = |v: VertexId, i: usize| if i == 0 { v } else { head_path(&map, v, i).src() };
    let mut corner: Vec<usize> = base.vertices().flat_map(|v| rep.vertex_support(vertex_at(v, i0))).collect();
    corner.sort_unstable();
    let sub = |m: &CMatrix| m.submatrix(&corner, &corner);
    let space = rep.space().restrict(&corner);
    let p = rep.p();
    let image = |alpha: Path, beta: Path| rep.monomial_image(&Monomial::new(alpha, beta).expect("paths share a range"));
    let vertices: Vec<CMatrix> = base.vertices().map(|v| sub(&rep.vertex_image(vertex_at(v, i0)).matrix)).collect();
    let mut edges = Vec::new();
    let mut ghosts = Vec::new();
    for e in base.edge_ids() {
        let hs = head_path(&map, base.src(e), i0);
        let hr = head_path(&map, base.dst(e), i0);
        let alpha = hs.concat(&Path::edge(base, e)).expect("head ends at the source");
        edges.push(sub(&image(alpha.clone(), hr.clone())));
        ghosts.push(sub(&image(hr, alpha)));
    }
    let labels = corner.iter().map(|&i| rep.labels()[i].clone()).collect();
    let mask = corner.iter().map(|&i| rep.mask()[i]).collect();
    let images = Images {
        vertices: certify_all(vertices, p, &space),
        edges: certify_all(edges, p, &space),
        ghosts: certify_all(ghosts, p, &space),
    };
    let sigma = Representation::new(base.clone(), p, space, labels, images, mask)?;
    let m = corner.len();
    let mut triplets = Vec::new();
    for v in base.vertices() {
        let ys = sigma.vertex_support(v);
        for i in 0..n {
            let e_i = image(head_path(&map, v, i), head_path(&map, v, i0));
            for &y in &ys {
                for (r, c, z) in e_i.entries() {
                    if c == corner[y] {
                        triplets.push((r, i * m + y, z));
                    }
                }
            }
        }
    }
    let u = CMatrix::from_triplets(rep.dim(), n * m, triplets);
    let u_inv = monomial_inverse(&u)?;
    let amplified = amplify(&sigma, n)?;
    let mut max_deviation: f64 = 0.0;
    for ((_, a), (_, b)) in rep.generators().iter().zip(amplified.generators()) {
        let conj = u.matmul(&b.matrix).matmul(&u_inv);
        max_deviation = max_deviation.max(a.matrix.max_abs_diff(&conj));
    }
    if max_deviation > 1e-12 {
        return Err(Error::Internal(format!("corner conjugation is off by {max_deviation:e}")));
    }
    Ok(CornerExtraction { sigma, u, max_deviation })
}

/// Relabels atoms: atom `j` moves to position `perm[j]`.
pub fn permute_atoms(rep: &Representation, perm: &[usize]) -> Result<Representation> {
    let n = rep.dim();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&j| j >= n || std::mem::replace(&mut seen[j], true)) {
        return Err(Error::precondition("not a permutation of the atoms"));
    }
    let pm = CMatrix::from_triplets(n, n, (0..n).map(|j| (perm[j], j, ONE)));
    let pt = pm.transpose();
    let mut inv = vec![0; n];
    for (j, &k) in perm.iter().enumerate() {
        inv[k] = j;
    }
    let space = FiniteMeasureSpace::new(inv.iter().map(|&j| rep.space().atoms()[j].clone()).collect())?;
    let conj = |ms: &[SpatialMatrix]| -> Vec<SpatialMatrix> {
        ms.iter().map(|m| certify(pm.matmul(&m.matrix).matmul(&pt), rep.p(), &space)).collect()
    };
    let images = Images {
        vertices: conj(&rep.images().vertices),
        edges: conj(&rep.images().edges),
        ghosts: conj(&rep.images().ghosts),
    };
    let labels = inv.iter().map(|&j| rep.labels()[j].clone()).collect();
    let mask = inv.iter().map(|&j| rep.mask()[j]).collect();
    Representation::new(rep.quiver().clone(), rep.p(), space, labels, images, mask)
}

fn invert(u: &CMatrix) -> Result<CMatrix> {
    if !u.is_square() {
        return Err(Error::NotInvertible("gauge block is not square".into()));
    }
    if u.is_diagonal() {
        let n = u.rows();
        if (0..n).any(|i| u.get(i, i).is_zero()) {
            return Err(Error::NotInvertible("singular diagonal gauge block".into()));
        }
        return Ok(CMatrix::from_triplets(n, n, (0..n).map(|i| (i, i, u.get(i, i).inv()))));
    }
    if let Ok(inv) = monomial_inverse(u) {
        return Ok(inv);
    }
    let d: DMatrix<Complex64> = u.to_dense();
    let inv = d.try_inverse().ok_or_else(|| Error::NotInvertible("singular gauge block".into()))?;
    Ok(CMatrix::from_dense(&inv))
}

/// `ρ_u(v) = ρ(v)`, `ρ_u(e) = u_{s(e)}ρ(e)`, `ρ_u(e*) = ρ(e*)u_{s(e)}⁻¹`.
///
/// `u_v` acts on `X_v` in increasing atom order; missing vertices use the
/// identity. Certificates survive only where the new images are spatial.
pub fn gauge_modify(rep: &Representation, u: &BTreeMap<VertexId, CMatrix>) -> Result<Representation> {
    let n = rep.dim();
    let q = rep.quiver();
    let mut full: BTreeMap<VertexId, (CMatrix, CMatrix)> = BTreeMap::new();
    for (&v, block) in u {
        let support = rep.vertex_support(v);
        if block.rows() != support.len() || block.cols() != support.len() {
            return Err(Error::precondition(format!(
                "gauge block for {} must be {}×{}",
                q.vertex_name(v),
                support.len(),
                support.len()
            )));
        }
        let inv = invert(block)?;
        full.insert(v, (block.embed(n, n, &support, &support), inv.embed(n, n, &support, &support)));
    }
    let p = rep.p();
    let space = rep.space();
    let mut edges = Vec::new();
    let mut ghosts = Vec::new();
    for e in q.edge_ids() {
        match full.get(&q.src(e)) {
            Some((uv, uinv)) => {
                edges.push(certify(uv.matmul(&rep.edge_image(e).matrix), p, space));
                ghosts.push(certify(rep.ghost_image(e).matrix.matmul(uinv), p, space));
            }
            None => {
                edges.push(rep.edge_image(e).clone());
                ghosts.push(rep.ghost_image(e).clone());
            }
        }
    }
    let images = Images { vertices: rep.images().vertices.clone(), edges, ghosts };
    Representation::new(q.clone(), p, space.clone(), rep.labels().to_vec(), images, rep.mask().to_vec())
}

/// `ρ^u(e) = ρ(e) ⊗ u`, `ρ^u(e*) = ρ(e*) ⊗ u⁻¹`, `ρ^u(v) = ρ(v) ⊗ 1` with
/// `u` the cyclic shift on `ℤ/N`; atom `(x, m)` sits at `x·N + m`.
pub fn shift_tensor_rep(rep: &Representation, modulus: usize) -> Result<Representation> {
    if modulus == 0 {
        return Err(Error::precondition("shift modulus must be positive"));
    }
    let nn = modulus;
    let shift = CMatrix::from_triplets(nn, nn, (0..nn).map(|m| ((m + 1) % nn, m, ONE)));
    let back = shift.transpose();
    let one = CMatrix::identity(nn);
    let space = rep.space().product(&index_space(nn));
    let p = rep.p();
    let tensor = |ms: &[SpatialMatrix], w: &CMatrix| -> Vec<SpatialMatrix> {
        ms.iter().map(|m| certify(m.matrix.kron(w), p, &space)).collect()
    };
    let images = Images {
        vertices: tensor(&rep.images().vertices, &one),
        edges: tensor(&rep.images().edges, &shift),
        ghosts: tensor(&rep.images().ghosts, &back),
    };
    let labels = inner_pair_labels(rep.labels(), nn);
    let mask = rep.mask().iter().flat_map(|&b| std::iter::repeat_n(b, nn)).collect();
    Representation::new(rep.quiver().clone(), p, space, labels, images, mask)
}

/// The canonical cells `E_m = X × {m}` of a shift-tensored space.
pub fn cyclic_cells(base_atoms: usize, modulus: usize) -> Vec<Vec<usize>> {
    (0..modulus).map(|m| (0..base_atoms).map(|x| x * modulus + m).collect()).collect()
}

fn cell_index(rep: &Representation, cells: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut owner = vec![usize::MAX; rep.dim()];
    for (k, cell) in cells.iter().enumerate() {
        for &i in cell {
            let slot = owner.get_mut(i).ok_or_else(|| Error::precondition("partition refers to a missing atom"))?;
            if *slot != usize::MAX {
                return Err(Error::precondition("partition cells overlap"));
            }
            *slot = k;
        }
    }
    if owner.contains(&usize::MAX) {
        return Err(Error::precondition("partition does not cover every atom"));
    }
    Ok(owner)
}

fn shifts_cells(rep: &Representation, cells: &[Vec<usize>], cyclic: bool) -> Result<bool> {
    let owner = cell_index(rep, cells)?;
    let k = cells.len();
    Ok(rep.quiver().edge_ids().all(|e| {
        rep.edge_image(e).matrix.entries().all(|(i, j, _)| {
            let next = owner[j] + 1;
            if cyclic {
                owner[i] == next % k
            } else {
                next < k && owner[i] == next
            }
        })
    }))
}

/// `ρ(e)(L^p(E_m)) ⊂ L^p(E_{m+1})` for every edge, with no wraparound.
pub fn is_free(rep: &Representation, cells: &[Vec<usize>]) -> Result<bool> {
    shifts_cells(rep, cells, false)
}

/// As [`is_free`] with cell indices taken modulo the number of cells.
pub fn is_approximately_free(rep: &Representation, cells: &[Vec<usize>]) -> Result<bool> {
    shifts_cells(rep, cells, true)
}

/// Keeps the atoms of `⋃_v X_v`.
pub fn restrict_nondegenerate(rep: &Representation) -> Result<Representation> {
    let mut keep: Vec<usize> = rep.quiver().vertices().flat_map(|v| rep.vertex_support(v)).collect();
    keep.sort_unstable();
    keep.dedup();
    let space = rep.space().restrict(&keep);
    let p = rep.p();
    let sub = |ms: &[SpatialMatrix]| -> Vec<SpatialMatrix> {
        ms.iter().map(|m| certify(m.matrix.submatrix(&keep, &keep), p, &space)).collect()
    };
    let images = Images {
        vertices: sub(&rep.images().vertices),
        edges: sub(&rep.images().edges),
        ghosts: sub(&rep.images().ghosts),
    };
    let labels = keep.iter().map(|&i| rep.labels()[i].clone()).collect();
    let mask = keep.iter().map(|&i| rep.mask()[i]).collect();
    Representation::new(rep.quiver().clone(), p, space, labels, images, mask)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveKind {
    /// Heads at sources.
    SourceRemoval,
    /// Tails at sinks.
    Desingularization,
}

/// A representation of the moved graph together with the inclusion of the
/// original space (original atoms keep their indices).
#[derive(Clone, Debug)]
pub struct MoveExtension {
    pub rep: Representation,
    pub map: MoveMap,
    pub original_atoms: usize,
}

impl MoveExtension {
    /// `max |ρ_#(φ_#(x)) - ρ(x) ⊕ 0|` over the given elements.
    pub fn deviation(&self, original: &Representation, xs: &[crate::lpa::LpaElement]) -> f64 {
        let n = self.rep.dim();
        let idx: Vec<usize> = (0..self.original_atoms).collect();
        xs.iter()
            .map(|x| {
                let lifted = original.evaluate(x).embed(n, n, &idx, &idx);
                self.rep.off_mask(&self.rep.evaluate(x)).max_abs_diff(&self.rep.off_mask(&lifted))
            })
            .fold(0.0, f64::max)
    }
}

/// Extends a nondegenerate representation along a graph move truncated at
/// `depth`: `Y = X ⊔ ⨆ X_w × {1..depth}` over the attachment vertices `w`,
/// with `ρ(f_i)` identifying consecutive copies.
pub fn extend_along_move(rep: &Representation, kind: MoveKind, depth: usize) -> Result<MoveExtension> {
    require_nondegenerate(rep)?;
    let q = rep.quiver();
    let decorated = match kind {
        MoveKind::SourceRemoval => q.remove_sources(),
        MoveKind::Desingularization => q.desingularize(),
    };
    let map = decorated.materialize_with_map(depth);
    let mq = &map.quiver;
    let n0 = rep.dim();
    let mut atoms: Vec<Atom> = rep.space().atoms().to_vec();
    let mut labels = rep.labels().to_vec();
    let mut mask = rep.mask().to_vec();
    // copies[a][i-1][k]: the copy of the k-th atom of X_w at level i
    let mut copies: Vec<Vec<Vec<usize>>> = Vec::new();
    for a in &map.attachments {
        let support = rep.vertex_support(a.vertex);
        let mut levels = Vec::new();
        for i in 1..=depth {
            let vname = mq.vertex_name(a.vertices[i - 1]);
            let mut level = Vec::new();
            for &x in &support {
                level.push(atoms.len());
                let label = format!("{}@{}", atoms[x].label, vname);
                atoms.push(Atom { label: label.clone(), weight: atoms[x].weight.clone() });
                labels.push(AtomLabel::Named(label));
                mask.push(rep.mask()[x]);
            }
            levels.push(level);
        }
        copies.push(levels);
    }
    let space = FiniteMeasureSpace::new(atoms)?;
    let n = space.len();
    let idx: Vec<usize> = (0..n0).collect();
    let lift = |m: &CMatrix| m.embed(n, n, &idx, &idx);
    let mut vertices = vec![CMatrix::zeros(n, n); mq.vertex_count()];
    let mut edges = vec![CMatrix::zeros(n, n); mq.edge_count()];
    for v in q.vertices() {
        vertices[v.index()] = lift(&rep.vertex_image(v).matrix);
    }
    for e in q.edge_ids() {
        edges[e.index()] = lift(&rep.edge_image(e).matrix);
    }
    for (a, levels) in map.attachments.iter().zip(&copies) {
        let base = rep.vertex_support(a.vertex);
        for i in 1..=depth {
            let here = &levels[i - 1];
            let below: &[usize] = if i == 1 { &base } else { &levels[i - 2] };
            vertices[a.vertices[i - 1].index()] = CMatrix::projection(n, here.iter().copied());
            let pairs: Vec<(usize, usize, Complex64)> = match a.kind {
                // f_i: v_{i-1} → v_i maps X_{v_i} onto X_{v_{i-1}}
                AttachmentKind::Tail => here.iter().zip(below).map(|(&x, &y)| (y, x, ONE)).collect(),
                // f_i: w_i → w_{i-1} maps X_{w_{i-1}} onto X_{w_i}
                AttachmentKind::Head => below.iter().zip(here).map(|(&x, &y)| (y, x, ONE)).collect(),
            };
            edges[a.edges[i - 1].index()] = CMatrix::from_triplets(n, n, pairs);
        }
    }
    let p = rep.p();
    let mut ghosts = Vec::new();
    for e in mq.edge_ids() {
        if e.index() < q.edge_count() {
            ghosts.push(lift(&rep.ghost_image(e).matrix));
        } else {
            ghosts.push(edges[e.index()].transpose());
        }
    }
    let images = Images {
        vertices: certify_all(vertices, p, &space),
        edges: certify_all(edges, p, &space),
        ghosts: certify_all(ghosts, p, &space),
    };
    let ext = Representation::new(mq.clone(), p, space, labels, images, mask)?;
    Ok(MoveExtension { rep: ext, map, original_atoms: n0 })
}
