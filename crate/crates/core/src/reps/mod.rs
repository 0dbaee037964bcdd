//! Concrete spatial representations of `L_Q` on finite measure spaces.
//!
//! A [`Representation`] stores the images of the generators `v`, `e`, `e*`.
//! Truncated models (of infinite boundary or germ spaces) carry a mask of
//! frontier atoms; relations are exact on the complement of the mask.

mod builders;
mod criterion;
mod ops;
#[cfg(test)]
mod tests;

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lpa::{LeavittAlgebra, LpaElement, Monomial};
use crate::quiver::{GraphJson, Path, Quiver, VertexId};
use crate::spatial::{
    is_spatial_partial_isometry, opnorm_p, CMatrix, FiniteMeasureSpace, NormOptions, SpaceJson, SpatialMatrix,
};

pub use builders::{boundary_path_rep, germ_groupoid_rep, germ_groupoid_rep_with, GERM_POINTS_PER_VERTEX};
pub use criterion::{
    harvest_orthogonal_isometries, rotated_projections_rep, spatiality_criterion, CriterionOptions, SpatialityVerdict,
};
pub use ops::{
    amplify, cyclic_cells, extend_along_move, extract_corner, gauge_modify, is_approximately_free, is_free,
    permute_atoms, restrict_nondegenerate, shift_tensor_rep, CornerExtraction, MoveExtension, MoveKind,
};

/// What an atom stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomLabel {
    /// `prefix·cycle^∞`, or a finite path ending at a sink when `cycle` is `None`.
    Boundary {
        prefix: Path,
        cycle: Option<Path>,
    },
    /// The germ `[αβ*, x]`.
    Germ {
        alpha: Path,
        beta: Path,
        point: usize,
    },
    /// `(i, x)` in a product with a finite index set.
    Pair {
        index: usize,
        inner: Box<AtomLabel>,
    },
    Named(String),
}

impl AtomLabel {
    pub fn render(&self, q: &Quiver) -> String {
        match self {
            AtomLabel::Boundary { prefix, cycle: None } => q.path_name(prefix),
            AtomLabel::Boundary { prefix, cycle: Some(c) } => {
                if prefix.is_vertex() {
                    format!("({})^inf", q.path_name(c))
                } else {
                    format!("{}.({})^inf", q.path_name(prefix), q.path_name(c))
                }
            }
            AtomLabel::Germ { alpha, beta, point } => {
                let m = Monomial::new(alpha.clone(), beta.clone()).expect("germ paths share a range");
                format!("[{},{}]", m.display(q), point)
            }
            AtomLabel::Pair { index, inner } => format!("({},{})", index, inner.render(q)),
            AtomLabel::Named(s) => s.clone(),
        }
    }
}

/// Images of the generators, indexed by vertex and edge id.
#[derive(Clone, Debug)]
pub struct Images {
    pub vertices: Vec<SpatialMatrix>,
    pub edges: Vec<SpatialMatrix>,
    pub ghosts: Vec<SpatialMatrix>,
}

#[derive(Clone, Debug)]
pub struct Representation {
    quiver: Quiver,
    p: f64,
    space: FiniteMeasureSpace,
    labels: Vec<AtomLabel>,
    images: Images,
    mask: Vec<bool>,
    residual: ResidualReport,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RelationResidual {
    pub relation: String,
    pub max: f64,
    pub worst: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ResidualReport {
    pub relations: Vec<RelationResidual>,
    pub max: f64,
    pub worst: Option<String>,
    /// Every generator maps to zero.
    pub zero: bool,
    /// `Σ_v ρ(v)` is the identity.
    pub nondegenerate: bool,
    pub masked_atoms: usize,
}

/// Certifies each image that is a spatial partial isometry for `p`.
pub(crate) fn certify(m: CMatrix, p: f64, space: &FiniteMeasureSpace) -> SpatialMatrix {
    match is_spatial_partial_isometry(&m, p, space) {
        Some(system) => SpatialMatrix { matrix: m, certificate: Some(crate::spatial::Certificate { system, p }) },
        None => SpatialMatrix::uncertified(m),
    }
}

impl Representation {
    pub fn new(
        quiver: Quiver,
        p: f64,
        space: FiniteMeasureSpace,
        labels: Vec<AtomLabel>,
        images: Images,
        mask: Vec<bool>,
    ) -> Result<Representation> {
        let n = space.len();
        if labels.len() != n || mask.len() != n {
            return Err(Error::precondition("labels and mask must have one entry per atom"));
        }
        if images.vertices.len() != quiver.vertex_count()
            || images.edges.len() != quiver.edge_count()
            || images.ghosts.len() != quiver.edge_count()
        {
            return Err(Error::precondition("one image per generator required"));
        }
        let all = images.vertices.iter().chain(&images.edges).chain(&images.ghosts);
        if all.clone().any(|m| m.matrix.rows() != n || m.matrix.cols() != n) {
            return Err(Error::precondition("generator image has the wrong shape"));
        }
        let mut rep = Representation {
            quiver,
            p,
            space,
            labels,
            images,
            mask,
            residual: ResidualReport {
                relations: vec![],
                max: 0.0,
                worst: None,
                zero: true,
                nondegenerate: false,
                masked_atoms: 0,
            },
        };
        rep.residual = rep.check_relations();
        Ok(rep)
    }

    /// Builds a representation from phase-one set maps, one per vertex and
    /// edge; `e*` gets the inverse map.
    pub(crate) fn from_maps(
        quiver: Quiver,
        p: f64,
        space: FiniteMeasureSpace,
        labels: Vec<AtomLabel>,
        vertex_sets: Vec<Vec<usize>>,
        edge_maps: Vec<Vec<(usize, usize)>>,
        mask: Vec<bool>,
    ) -> Result<Representation> {
        let n = space.len();
        let vertices = vertex_sets.into_iter().map(|s| certify(CMatrix::projection(n, s), p, &space)).collect();
        let mut edges = Vec::new();
        let mut ghosts = Vec::new();
        for pairs in edge_maps {
            let fwd = crate::spatial::spatial_from_system(&crate::spatial::SpatialSystem::from_map(pairs), p, &space)?;
            ghosts.push(fwd.reverse(&space)?);
            edges.push(fwd);
        }
        Representation::new(quiver, p, space, labels, Images { vertices, edges, ghosts }, mask)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn space(&self) -> &FiniteMeasureSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.len()
    }

    pub fn labels(&self) -> &[AtomLabel] {
        &self.labels
    }

    pub fn images(&self) -> &Images {
        &self.images
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn residual(&self) -> &ResidualReport {
        &self.residual
    }

    pub fn vertex_image(&self, v: VertexId) -> &SpatialMatrix {
        &self.images.vertices[v.index()]
    }

    pub fn edge_image(&self, e: crate::quiver::EdgeId) -> &SpatialMatrix {
        &self.images.edges[e.index()]
    }

    pub fn ghost_image(&self, e: crate::quiver::EdgeId) -> &SpatialMatrix {
        &self.images.ghosts[e.index()]
    }

    /// Image of a generator by name: a vertex, an edge, or `e*`.
    pub fn generator(&self, name: &str) -> Result<&SpatialMatrix> {
        if let Some(base) = name.strip_suffix('*') {
            let e = self.quiver.edge_id(base).ok_or_else(|| Error::UnknownName(name.into()))?;
            return Ok(self.ghost_image(e));
        }
        if let Some(v) = self.quiver.vertex_id(name) {
            return Ok(self.vertex_image(v));
        }
        let e = self.quiver.edge_id(name).ok_or_else(|| Error::UnknownName(name.into()))?;
        Ok(self.edge_image(e))
    }

    /// All generators as `(name, image)`: vertices, edges, then ghosts.
    pub fn generators(&self) -> Vec<(String, &SpatialMatrix)> {
        let q = &self.quiver;
        let mut out: Vec<(String, &SpatialMatrix)> =
            q.vertices().map(|v| (q.vertex_name(v).to_string(), self.vertex_image(v))).collect();
        out.extend(q.edge_ids().map(|e| (q.edge_name(e).to_string(), self.edge_image(e))));
        out.extend(q.edge_ids().map(|e| (format!("{}*", q.edge_name(e)), self.ghost_image(e))));
        out
    }

    /// `X_v`: the atoms on which `ρ(v)` is nonzero.
    pub fn vertex_support(&self, v: VertexId) -> Vec<usize> {
        let m = &self.vertex_image(v).matrix;
        (0..m.rows()).filter(|&i| !m.get(i, i).is_zero()).collect()
    }

    /// `ρ(α)`; for a trivial path this is the vertex projection.
    pub fn path_image(&self, alpha: &Path) -> CMatrix {
        if alpha.is_vertex() {
            return self.vertex_image(alpha.src()).matrix.clone();
        }
        let mut edges = alpha.edges().iter();
        let first = edges.next().expect("nontrivial path");
        let mut acc = self.edge_image(*first).matrix.clone();
        for e in edges {
            acc = acc.matmul(&self.edge_image(*e).matrix);
        }
        acc
    }

    /// `ρ(β*) = ρ(e_k*)···ρ(e_1*)`.
    pub fn ghost_path_image(&self, beta: &Path) -> CMatrix {
        if beta.is_vertex() {
            return self.vertex_image(beta.src()).matrix.clone();
        }
        let mut edges = beta.edges().iter().rev();
        let last = edges.next().expect("nontrivial path");
        let mut acc = self.ghost_image(*last).matrix.clone();
        for e in edges {
            acc = acc.matmul(&self.ghost_image(*e).matrix);
        }
        acc
    }

    pub fn monomial_image(&self, m: &Monomial) -> CMatrix {
        match (m.alpha().is_vertex(), m.beta().is_vertex()) {
            (true, true) => self.vertex_image(m.alpha().src()).matrix.clone(),
            (false, true) => self.path_image(m.alpha()),
            (true, false) => self.ghost_path_image(m.beta()),
            (false, false) => self.path_image(m.alpha()).matmul(&self.ghost_path_image(m.beta())),
        }
    }

    /// `ρ(x)`, evaluated term by term.
    pub fn evaluate(&self, x: &LpaElement) -> CMatrix {
        let n = self.dim();
        let mut triplets = Vec::new();
        for (m, c) in x.terms() {
            let z = c.to_complex();
            triplets.extend(self.monomial_image(m).entries().map(|(i, j, w)| (i, j, w * z)));
        }
        CMatrix::from_triplets(n, n, triplets)
    }

    /// Zeroes the rows and columns of masked atoms.
    pub fn off_mask(&self, m: &CMatrix) -> CMatrix {
        if !self.mask.iter().any(|&b| b) {
            return m.clone();
        }
        CMatrix::from_triplets(m.rows(), m.cols(), m.entries().filter(|&(i, j, _)| !self.mask[i] && !self.mask[j]))
    }

    /// The mask grown by `radius` generator steps: an atom within `radius`
    /// applications of `ρ(e)` or `ρ(e*)` of a masked atom is masked too.
    /// Entries of `ρ(αβ*)` with `|α|, |β| ≤ radius` between unmasked atoms
    /// are exact.
    pub fn mask_with_margin(&self, radius: usize) -> Vec<bool> {
        let mut mask = self.mask.clone();
        for _ in 0..radius {
            let mut next = mask.clone();
            for m in self.images.edges.iter().chain(&self.images.ghosts) {
                for (i, j, _) in m.matrix.entries() {
                    if mask[i] || mask[j] {
                        next[i] = true;
                        next[j] = true;
                    }
                }
            }
            mask = next;
        }
        mask
    }

    /// Zeroes the rows and columns flagged in `mask`.
    pub fn restrict_to(&self, m: &CMatrix, mask: &[bool]) -> CMatrix {
        CMatrix::from_triplets(m.rows(), m.cols(), m.entries().filter(|&(i, j, _)| !mask[i] && !mask[j]))
    }

    /// Columns `j` of `ρ(x)` that are exact: for every term `αβ*` of `x`,
    /// the walk of `e_j` through `ρ(β*)` then `ρ(α)` applies each generator
    /// at unmasked atoms only.
    pub fn exact_columns(&self, x: &LpaElement) -> Vec<bool> {
        let n = self.dim();
        let mut exact = vec![true; n];
        if !self.mask.iter().any(|&b| b) {
            return exact;
        }
        for (m, _) in x.terms() {
            let steps = m
                .beta()
                .edges()
                .iter()
                .map(|&e| self.ghost_image(e))
                .chain(m.alpha().edges().iter().rev().map(|&e| self.edge_image(e)));
            let mut cur = CMatrix::identity(n);
            for g in steps {
                for (i, j, _) in cur.entries() {
                    if self.mask[i] {
                        exact[j] = false;
                    }
                }
                cur = g.matrix.abs().matmul(&cur);
            }
        }
        exact
    }

    /// `ρ(x)` restricted to its exact columns ([`Representation::exact_columns`]),
    /// a compression of the untruncated operator. Equals `ρ(x)` when nothing
    /// is masked.
    pub fn interior_image(&self, x: &LpaElement) -> CMatrix {
        let m = self.evaluate(x);
        let exact = self.exact_columns(x);
        CMatrix::from_triplets(m.rows(), m.cols(), m.entries().filter(|&(_, j, _)| exact[j]))
    }

    /// Bounds for the norm of [`Representation::interior_image`].
    pub fn interior_norm(&self, x: &LpaElement, opts: &NormOptions) -> Result<crate::spatial::NormBounds> {
        opnorm_p(&self.interior_image(x), self.p, Some(&self.space), opts)
    }

    /// `‖ρ(x)‖_p` bounds on the representation's space.
    pub fn norm(&self, x: &LpaElement, opts: &NormOptions) -> Result<crate::spatial::NormBounds> {
        opnorm_p(&self.evaluate(x), self.p, Some(&self.space), opts)
    }

    /// Per-relation deviations in operator 2-norm, off the mask.
    pub fn check_relations(&self) -> ResidualReport {
        let q = &self.quiver;
        let n = self.dim();
        let mut table: Vec<RelationResidual> = Vec::new();
        let mut record = |relation: &str, label: String, dev: CMatrix| {
            let dev = self.off_mask(&dev);
            let value = if dev.is_zero() {
                0.0
            } else {
                opnorm_p(&dev, 2.0, None, &NormOptions::default()).map_or(f64::INFINITY, |b| b.upper)
            };
            let slot = match table.iter_mut().find(|r| r.relation == relation) {
                Some(s) => s,
                None => {
                    table.push(RelationResidual { relation: relation.into(), max: 0.0, worst: None });
                    table.last_mut().expect("just pushed")
                }
            };
            if value > slot.max || (slot.worst.is_none() && value > 0.0) {
                slot.max = value;
                slot.worst = Some(label);
            }
        };
        let vimg = |v: VertexId| &self.vertex_image(v).matrix;
        for v in q.vertices() {
            for w in q.vertices() {
                let prod = vimg(v).matmul(vimg(w));
                let dev = if v == w { &prod - vimg(v) } else { prod };
                record("vertex", format!("{}·{}", q.vertex_name(v), q.vertex_name(w)), dev);
            }
        }
        for e in q.edge_ids() {
            let name = q.edge_name(e);
            let (s, r) = (q.src(e), q.dst(e));
            let ee = &self.edge_image(e).matrix;
            let eg = &self.ghost_image(e).matrix;
            record("source-range", format!("s({name})·{name}"), &vimg(s).matmul(ee) - ee);
            record("source-range", format!("{name}·r({name})"), &ee.matmul(vimg(r)) - ee);
            record("source-range", format!("r({name})·{name}*"), &vimg(r).matmul(eg) - eg);
            record("source-range", format!("{name}*·s({name})"), &eg.matmul(vimg(s)) - eg);
        }
        for e in q.edge_ids() {
            for f in q.edge_ids() {
                let prod = self.ghost_image(e).matrix.matmul(&self.edge_image(f).matrix);
                let dev = if e == f { &prod - vimg(q.dst(e)) } else { prod };
                record("CK1", format!("{}*·{}", q.edge_name(e), q.edge_name(f)), dev);
            }
        }
        for v in q.vertices().filter(|&v| q.is_regular(v)) {
            let mut sum = CMatrix::zeros(n, n);
            for &e in q.out_edges(v) {
                sum = &sum + &self.edge_image(e).matrix.matmul(&self.ghost_image(e).matrix);
            }
            record("CK2", q.vertex_name(v).to_string(), &sum - vimg(v));
        }
        let (max, worst) = table.iter().fold((0.0f64, None), |(m, w), r| {
            if r.max > m {
                (r.max, r.worst.as_ref().map(|s| format!("{}: {}", r.relation, s)))
            } else {
                (m, w)
            }
        });
        let zero = self.generators().iter().all(|(_, m)| m.matrix.is_zero());
        let mut total = CMatrix::zeros(n, n);
        for v in q.vertices() {
            total = &total + vimg(v);
        }
        ResidualReport {
            relations: table,
            max,
            worst,
            zero,
            nondegenerate: total == CMatrix::identity(n),
            masked_atoms: self.mask.iter().filter(|&&b| b).count(),
        }
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.residual.nondegenerate
    }

    pub fn is_spatial(&self) -> bool {
        self.generators().iter().all(|(_, m)| is_spatial_partial_isometry(&m.matrix, self.p, &self.space).is_some())
    }

    /// Recomputes certificates for a new exponent.
    pub fn with_p(&self, p: f64) -> Result<Representation> {
        let recert = |ms: &[SpatialMatrix]| ms.iter().map(|m| certify(m.matrix.clone(), p, &self.space)).collect();
        let images = Images {
            vertices: recert(&self.images.vertices),
            edges: recert(&self.images.edges),
            ghosts: recert(&self.images.ghosts),
        };
        Representation::new(self.quiver.clone(), p, self.space.clone(), self.labels.clone(), images, self.mask.clone())
    }

    pub fn to_json(&self) -> RepresentationJson {
        RepresentationJson {
            graph: self.quiver.to_graph_json(),
            p: self.p,
            space: self.space.to_json(),
            mask: self.mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect(),
            images: self
                .generators()
                .into_iter()
                .map(|(name, m)| (name, SparseMatrixJson::from_matrix(&m.matrix)))
                .collect(),
            residual: self.residual.clone(),
        }
    }

    pub fn from_json(j: &RepresentationJson) -> Result<Representation> {
        let quiver = Quiver::from_graph_json(&j.graph)?;
        let space = FiniteMeasureSpace::from_json(&j.space)?;
        let n = space.len();
        let mut mask = vec![false; n];
        for &i in &j.mask {
            *mask.get_mut(i).ok_or_else(|| Error::precondition("mask refers to a missing atom"))? = true;
        }
        let fetch = |name: String| -> Result<SpatialMatrix> {
            let m = j.images.get(&name).ok_or_else(|| Error::UnknownName(name.clone()))?.to_matrix()?;
            Ok(certify(m, j.p, &space))
        };
        let images = Images {
            vertices: quiver.vertices().map(|v| fetch(quiver.vertex_name(v).into())).collect::<Result<_>>()?,
            edges: quiver.edge_ids().map(|e| fetch(quiver.edge_name(e).into())).collect::<Result<_>>()?,
            ghosts: quiver.edge_ids().map(|e| fetch(format!("{}*", quiver.edge_name(e)))).collect::<Result<_>>()?,
        };
        let labels = space.atoms().iter().map(|a| AtomLabel::Named(a.label.clone())).collect();
        Representation::new(quiver, j.p, space, labels, images, mask)
    }
}

/// Sparse `[row, col, re, im]` entries.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SparseMatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, f64, f64)>,
}

impl SparseMatrixJson {
    pub fn from_matrix(m: &CMatrix) -> SparseMatrixJson {
        SparseMatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().map(|(i, j, z)| (i, j, z.re, z.im)).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.entries.iter().any(|&(i, j, _, _)| i >= self.rows || j >= self.cols) {
            return Err(Error::precondition("sparse entry out of bounds"));
        }
        Ok(CMatrix::from_triplets(
            self.rows,
            self.cols,
            self.entries.iter().map(|&(i, j, re, im)| (i, j, Complex64::new(re, im))),
        ))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepresentationJson {
    pub graph: GraphJson,
    pub p: f64,
    pub space: SpaceJson,
    pub mask: Vec<usize>,
    pub images: BTreeMap<String, SparseMatrixJson>,
    pub residual: ResidualReport,
}

/// `ρ(x)` for an element of an algebra over the representation's quiver.
pub fn evaluate(rep: &Representation, alg: &LeavittAlgebra, x: &LpaElement) -> Result<CMatrix> {
    if alg.quiver() != rep.quiver() {
        return Err(Error::precondition("element and representation live on different graphs"));
    }
    Ok(rep.evaluate(x))
}

/// The representation builders selectable by name: `boundary`, `germ`,
/// `shift:N` (boundary rep tensored with the shift on `ℤ/N`) and
/// `germ-shift:N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepKind {
    Boundary,
    Germ,
    BoundaryShift(usize),
    GermShift(usize),
}

impl RepKind {
    pub fn build(self, q: &Quiver, p: f64, depth: usize) -> Result<Representation> {
        match self {
            RepKind::Boundary => boundary_path_rep(q, p, depth),
            RepKind::Germ => germ_groupoid_rep(q, p, depth),
            RepKind::BoundaryShift(n) => shift_tensor_rep(&boundary_path_rep(q, p, depth)?, n),
            RepKind::GermShift(n) => shift_tensor_rep(&germ_groupoid_rep(q, p, depth)?, n),
        }
    }
}

impl std::fmt::Display for RepKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RepKind::Boundary => write!(f, "boundary"),
            RepKind::Germ => write!(f, "germ"),
            RepKind::BoundaryShift(n) => write!(f, "shift:{n}"),
            RepKind::GermShift(n) => write!(f, "germ-shift:{n}"),
        }
    }
}

impl std::str::FromStr for RepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<RepKind> {
        let modulus = |t: &str| -> Result<usize> {
            match t.parse::<usize>() {
                Ok(n) if n > 0 => Ok(n),
                _ => Err(Error::precondition(format!("bad shift modulus `{t}`"))),
            }
        };
        match s {
            "boundary" => Ok(RepKind::Boundary),
            "germ" => Ok(RepKind::Germ),
            _ => {
                if let Some(t) = s.strip_prefix("shift:") {
                    Ok(RepKind::BoundaryShift(modulus(t)?))
                } else if let Some(t) = s.strip_prefix("germ-shift:") {
                    Ok(RepKind::GermShift(modulus(t)?))
                } else {
                    Err(Error::precondition(format!("unknown representation `{s}`")))
                }
            }
        }
    }
}
