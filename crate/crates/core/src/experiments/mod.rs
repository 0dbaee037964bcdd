//! Reproducible experiments assembled from the other modules.
//!
//! Every experiment returns an [`ExperimentReport`]: the inputs, the norm
//! intervals it computed, and a list of checks. A check records the
//! expected outcome, so negative controls (inputs engineered to fail)
//! carry `expected: false` and pass when they are caught.

mod words;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lpa::sample::{random_element, SampleOptions};
use crate::lpa::{LeavittAlgebra, LpaElement};
use crate::quiver::{GraphJson, NonSimpleReason, Path, Quiver, VertexId};
use crate::reps::{boundary_path_rep, extend_along_move, gauge_modify, MoveKind, RepKind, Representation};
use crate::scalar::GaussianRational;
use crate::spatial::{CMatrix, NormBounds, NormOptions};

pub use words::{
    gamma_experiment, gamma_square_prefix, gamma_word, incomparable_cycles, linfty_generators, square_prefix,
};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ReportInputs {
    pub graph: GraphJson,
    pub p: Option<f64>,
    pub depths: Vec<usize>,
    pub seed: Option<u64>,
    pub elements: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct NormRecord {
    pub element: String,
    pub rep: String,
    pub depth: Option<usize>,
    pub lower: f64,
    pub upper: f64,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: bool,
    pub observed: bool,
    pub tolerance: Option<f64>,
    pub witness: Option<String>,
}

impl Check {
    pub fn ok(&self) -> bool {
        self.expected == self.observed
    }

    pub fn is_control(&self) -> bool {
        !self.expected
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ExperimentReport {
    pub experiment: String,
    pub inputs: ReportInputs,
    pub records: Vec<NormRecord>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub passed: bool,
}

impl ExperimentReport {
    fn new(experiment: &str, q: &Quiver) -> ExperimentReport {
        ExperimentReport {
            experiment: experiment.to_string(),
            inputs: ReportInputs { graph: q.to_graph_json(), p: None, depths: vec![], seed: None, elements: vec![] },
            records: vec![],
            checks: vec![],
            notes: vec![],
            passed: false,
        }
    }

    fn check(
        &mut self,
        name: impl Into<String>,
        expected: bool,
        observed: bool,
        tolerance: Option<f64>,
        witness: Option<String>,
    ) {
        self.checks.push(Check { name: name.into(), expected, observed, tolerance, witness });
    }

    fn finish(mut self) -> ExperimentReport {
        self.passed = !self.checks.is_empty() && self.checks.iter().all(Check::ok);
        self
    }

    pub fn check_named(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `element,rep,depth,lower,upper,certified` rows.
    pub fn to_csv(&self) -> Result<String> {
        let csv_err = |e: csv::Error| Error::Internal(e.to_string());
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        w.write_record(["element", "rep", "depth", "lower", "upper", "certified"]).map_err(csv_err)?;
        for r in &self.records {
            w.serialize(r).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentOptions {
    pub seed: u64,
    /// Truncation depth of boundary and germ models of cyclic graphs.
    pub depth: usize,
    /// Random elements drawn when the caller gives none.
    pub samples: usize,
    pub norm: NormOptions,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        ExperimentOptions { seed: 0, depth: 5, samples: 200, norm: NormOptions::default() }
    }
}

/// `count` seeded random elements: support `≤ 6`, path lengths `≤ 3`.
pub fn sample_elements(alg: &LeavittAlgebra, count: usize, seed: u64) -> Vec<LpaElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_element(alg, SampleOptions::default(), &mut rng)).collect()
}

fn record(element: String, rep: String, depth: Option<usize>, b: &NormBounds) -> NormRecord {
    NormRecord { element, rep, depth, lower: b.lower, upper: b.upper, certified: b.certified }
}

/// Distance between two intervals, `0` when they meet.
fn separation(a: &NormBounds, b: &NormBounds) -> f64 {
    (a.lower - b.upper).max(b.lower - a.upper).max(0.0)
}

fn require_simple(q: &Quiver) -> Result<()> {
    if q.is_simple().simple {
        Ok(())
    } else {
        Err(Error::precondition("the graph is not simple"))
    }
}

/// The boundary rep with `ρ(e)` scaled by `2` at the source of the first
/// edge: a non-contractive representation used as a negative control.
fn spoiled(rep: &Representation) -> Result<Option<(Representation, LpaElement)>> {
    let q = rep.quiver();
    let Some(e) = q.edge_ids().next() else { return Ok(None) };
    let v = q.src(e);
    let n = rep.vertex_support(v).len();
    let u = BTreeMap::from([(v, CMatrix::identity(n).scale(Complex64::new(2.0, 0.0)))]);
    let alg = LeavittAlgebra::new(q.clone());
    Ok(Some((gauge_modify(rep, &u)?, alg.edge(e))))
}

/// Control shared by the norm comparisons: a spoiled representation (or,
/// on graphs without edges, a doubled element) must be told apart.
fn norm_control(report: &mut ExperimentReport, base: &Representation, tol: f64, opts: &NormOptions) -> Result<()> {
    let q = base.quiver();
    let alg = LeavittAlgebra::new(q.clone());
    let (a, b, what) = match spoiled(base)? {
        Some((bad, x)) => {
            (base.norm(&x, opts)?, bad.norm(&x, opts)?, format!("gauge-spoiled rep on {}", alg.format(&x)))
        }
        None => {
            let v = alg.vertex(VertexId(0));
            let two = alg.scalar(GaussianRational::from_integer(2));
            (base.norm(&v, opts)?, base.norm(&alg.mul(&two, &v), opts)?, "doubled vertex".to_string())
        }
    };
    report.check(
        format!("control: {what} agrees"),
        false,
        a.overlaps(&b, tol),
        Some(tol),
        Some(format!("[{}, {}] vs [{}, {}]", a.lower, a.upper, b.lower, b.upper)),
    );
    Ok(())
}

fn default_uniqueness_reps() -> Vec<RepKind> {
    vec![RepKind::Boundary, RepKind::Germ, RepKind::BoundaryShift(3), RepKind::GermShift(3)]
}

/// Compares the norms of `elements` across structurally different spatial
/// representations. Acyclic graphs have exact finite models and the
/// intervals must overlap within `1e-7`. For cyclic graphs the maximal
/// separation between intervals is recorded per depth and must not grow;
/// this is a convergence diagnostic, not a proof.
pub fn uniqueness_experiment(
    q: &Quiver,
    p: f64,
    elements: &[LpaElement],
    depths: &[usize],
    opts: &ExperimentOptions,
) -> Result<ExperimentReport> {
    require_simple(q)?;
    let alg = LeavittAlgebra::new(q.clone());
    let names: Vec<String> = elements.iter().map(|x| alg.format(x)).collect();
    let mut report = ExperimentReport::new("uniqueness", q);
    report.inputs.p = Some(p);
    report.inputs.seed = Some(opts.seed);
    report.inputs.elements = names.clone();
    let kinds = default_uniqueness_reps();
    let tol = 1e-7;
    let acyclic = q.cycles().is_empty();
    let depths: Vec<usize> = if acyclic { vec![q.vertex_count()] } else { depths.to_vec() };
    if depths.is_empty() {
        return Err(Error::precondition("at least one depth is required"));
    }
    report.inputs.depths = depths.clone();
    let mut gaps = Vec::new();
    for &d in &depths {
        let reps: Vec<Representation> = kinds.iter().map(|k| k.build(q, p, d)).collect::<Result<_>>()?;
        let mut gap: f64 = 0.0;
        let mut worst = None;
        for (x, name) in elements.iter().zip(&names) {
            let bounds: Vec<NormBounds> = reps.iter().map(|r| r.interior_norm(x, &opts.norm)).collect::<Result<_>>()?;
            for (k, b) in kinds.iter().zip(&bounds) {
                report.records.push(record(name.clone(), k.to_string(), (!acyclic).then_some(d), b));
            }
            for i in 0..bounds.len() {
                for j in i + 1..bounds.len() {
                    let s = separation(&bounds[i], &bounds[j]);
                    if s > gap {
                        gap = s;
                        worst = Some(format!("{name}: {} vs {}", kinds[i], kinds[j]));
                    }
                }
            }
        }
        if acyclic {
            report.check("intervals overlap across representations", true, gap <= tol, Some(tol), worst);
        } else {
            report.notes.push(format!("depth {d}: gap {gap:e}"));
        }
        gaps.push(gap);
    }
    if !acyclic {
        let monotone = gaps.windows(2).all(|w| w[1] <= w[0] + 1e-9);
        report.check(
            "cross-representation gap is non-increasing in depth",
            true,
            monotone,
            Some(1e-9),
            Some(format!("{gaps:?}")),
        );
        report.notes.push("cyclic graph: truncation diagnostic only, not a proof of uniqueness".to_string());
    }
    let base = boundary_path_rep(q, p, *depths.last().expect("nonempty"))?;
    norm_control(&mut report, &base, tol, &opts.norm)?;
    Ok(report.finish())
}

/// `L_Q → L_{Q/H}` on generators: vertices of `H` and edges into `H` die.
fn quotient_rep(q: &Quiver, h: &[VertexId], p: f64, depth: usize) -> Result<Representation> {
    let qh = q.quotient_graph(h)?;
    let sigma = boundary_path_rep(&qh, p, depth)?;
    let n = sigma.dim();
    let zero = || crate::spatial::SpatialMatrix::uncertified(CMatrix::zeros(n, n));
    let mut vertices = Vec::new();
    for v in q.vertices() {
        vertices.push(match qh.vertex_id(q.vertex_name(v)) {
            Some(w) => sigma.vertex_image(w).clone(),
            None => zero(),
        });
    }
    let mut edges = Vec::new();
    let mut ghosts = Vec::new();
    for e in q.edge_ids() {
        match qh.edge_id(q.edge_name(e)) {
            Some(f) => {
                edges.push(sigma.edge_image(f).clone());
                ghosts.push(sigma.ghost_image(f).clone());
            }
            None => {
                edges.push(zero());
                ghosts.push(zero());
            }
        }
    }
    Representation::new(
        q.clone(),
        p,
        sigma.space().clone(),
        sigma.labels().to_vec(),
        crate::reps::Images { vertices, edges, ghosts },
        sigma.mask().to_vec(),
    )
}

/// For simple graphs, random nonzero elements must have nonzero images
/// under the boundary and germ representations. Otherwise an explicit
/// representation killing a nonzero element is built and verified.
pub fn simplicity_witness(q: &Quiver, p: f64, opts: &ExperimentOptions) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new("simplicity", q);
    report.inputs.p = Some(p);
    report.inputs.seed = Some(opts.seed);
    report.inputs.depths = vec![opts.depth];
    let verdict = q.is_simple();
    let alg = LeavittAlgebra::new(q.clone());
    match verdict.reason {
        None => {
            let xs = sample_elements(&alg, opts.samples, opts.seed);
            report.inputs.elements = xs.iter().map(|x| alg.format(x)).collect();
            for kind in [RepKind::Boundary, RepKind::Germ] {
                let rep = kind.build(q, p, opts.depth)?;
                let zeros: Vec<&String> = xs
                    .iter()
                    .zip(&report.inputs.elements)
                    .filter(|(x, _)| rep.interior_image(x).is_zero())
                    .map(|(_, s)| s)
                    .collect();
                let nonzero = xs.len() - zeros.len();
                report.check(
                    format!("{kind}: {nonzero}/{} nonzero images", xs.len()),
                    true,
                    zeros.is_empty(),
                    Some(0.0),
                    zeros.first().map(|s| s.to_string()),
                );
                report.check(
                    format!("control: {kind} maps 0 to a nonzero matrix"),
                    false,
                    !rep.evaluate(&LpaElement::zero()).is_zero(),
                    Some(0.0),
                    None,
                );
            }
        }
        Some(NonSimpleReason::Empty) => {
            report.notes.push("the empty graph has the zero algebra".to_string());
            report.check("algebra is zero", true, true, None, None);
        }
        Some(NonSimpleReason::HereditarySaturated(h)) => {
            let hn: Vec<&str> = h.iter().map(|&v| q.vertex_name(v)).collect();
            report.notes.push(format!("proper hereditary saturated set {{{}}}", hn.join(", ")));
            let rho = quotient_rep(q, &h, p, opts.depth)?;
            report.check(
                "composite is a representation",
                true,
                rho.residual().max == 0.0,
                Some(0.0),
                rho.residual().worst.clone(),
            );
            let killed = h.iter().all(|&v| rho.vertex_image(v).matrix.is_zero());
            report.check("composite kills H", true, killed, Some(0.0), Some(hn.join(",")));
            let alive: Vec<String> = q
                .vertices()
                .filter(|v| !h.contains(v))
                .chain(q.edge_ids().filter(|&e| !h.contains(&q.dst(e))).map(|e| q.src(e)))
                .filter(|&v| rho.vertex_image(v).matrix.is_zero())
                .map(|v| q.vertex_name(v).to_string())
                .collect();
            report.check("composite is nonzero off H", true, alive.is_empty(), Some(0.0), alive.first().cloned());
            for e in q.edge_ids().filter(|&e| !h.contains(&q.dst(e))) {
                let nz = !rho.edge_image(e).matrix.is_zero();
                report.check(format!("composite keeps {}", q.edge_name(e)), true, nz, Some(0.0), None);
            }
            let full = boundary_path_rep(q, p, opts.depth)?;
            let v = h[0];
            report.check(
                format!("control: boundary rep of Q kills {}", q.vertex_name(v)),
                false,
                full.vertex_image(v).matrix.is_zero(),
                Some(0.0),
                None,
            );
        }
        Some(NonSimpleReason::CycleWithoutExit(c)) => {
            let rep = boundary_path_rep(q, p, opts.depth)?;
            let cx = alg.path(c.path.clone());
            let x = cx.clone() - alg.mul(&cx, &cx);
            report.inputs.elements = vec![alg.format(&x)];
            report.notes.push(format!("cycle without exit {}", q.path_name(&c.path)));
            report.check("c - c² is nonzero in L_Q", true, !x.is_zero(), None, Some(alg.format(&x)));
            report.check("boundary rep kills c - c²", true, rep.evaluate(&x).is_zero(), Some(0.0), None);
            let v = c.base();
            report.check(
                format!("boundary rep keeps {}", q.vertex_name(v)),
                true,
                !rep.vertex_image(v).matrix.is_zero(),
                Some(0.0),
                None,
            );
            report.check("control: boundary rep kills c", false, rep.evaluate(&cx).is_zero(), Some(0.0), None);
        }
    }
    Ok(report.finish())
}

/// Atoms `j` with `ρ(α)_{ij} ≠ 0` for some `i`, mapped to those `i`.
fn translate(rep: &Representation, alpha: &Path, set: &[usize]) -> Vec<usize> {
    let m = rep.path_image(alpha);
    let inside: std::collections::BTreeSet<usize> = set.iter().copied().collect();
    let mut out: Vec<usize> = m.entries().filter(|(_, j, _)| inside.contains(j)).map(|(i, _, _)| i).collect();
    out.sort_unstable();
    out
}

fn first_overlap(family: &[(String, Vec<usize>)]) -> Option<String> {
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            let (a, b) = (&family[i].1, &family[j].1);
            if a.iter().any(|x| b.binary_search(x).is_ok()) {
                return Some(format!("{} meets {}", family[i].0, family[j].0));
            }
        }
    }
    None
}

/// Builds `E_v` (`X_{γ_1…γ_{2n}}` for `v` on a cycle, `X_v` otherwise) and
/// checks that `S_α(E_v)`, `r(α) = v`, `|α| ≤ n`, are pairwise disjoint.
pub fn disjoint_translates(q: &Quiver, rep: &Representation, n: usize) -> Result<ExperimentReport> {
    require_simple(q)?;
    if rep.quiver() != q {
        return Err(Error::precondition("representation is over a different graph"));
    }
    if !rep.is_nondegenerate() || !rep.is_spatial() {
        return Err(Error::precondition("representation must be spatial and nondegenerate"));
    }
    let mut report = ExperimentReport::new("disjoint-translates", q);
    report.inputs.p = Some(rep.p());
    report.inputs.depths = vec![n];
    let mut control: Option<Vec<(String, Vec<usize>)>> = None;
    for v in q.vertices() {
        let xv = rep.vertex_support(v);
        if xv.is_empty() {
            return Err(Error::precondition(format!("X_{} is empty", q.vertex_name(v))));
        }
        let ev = if q.on_cycle(v) {
            let gamma = gamma_word(q, v, 2 * n)?;
            let img = rep.monomial_image(&crate::lpa::Monomial::idempotent(gamma.clone()));
            report.notes.push(format!("E_{} = X_{}", q.vertex_name(v), q.path_name(&gamma)));
            (0..rep.dim()).filter(|&i| !img.get(i, i).re.eq(&0.0)).collect::<Vec<_>>()
        } else {
            xv.clone()
        };
        report.check(format!("E_{} is nonempty", q.vertex_name(v)), true, !ev.is_empty(), None, None);
        let family: Vec<(String, Vec<usize>)> = q
            .paths_up_to(n, None, Some(v))
            .into_iter()
            .map(|a| (format!("S_{}(E_{})", q.path_name(&a), q.vertex_name(v)), translate(rep, &a, &ev)))
            .collect();
        let clash = first_overlap(&family);
        report.check(
            format!("translates into {} are disjoint", q.vertex_name(v)),
            true,
            clash.is_none(),
            Some(0.0),
            clash,
        );
        if control.is_none() {
            if let Some((name, set)) = family.iter().rev().find(|(_, s)| !s.is_empty()) {
                let alpha_src = rep
                    .quiver()
                    .vertices()
                    .find(|&w| set.iter().all(|i| rep.vertex_support(w).contains(i)))
                    .expect("translates sit inside a vertex set");
                control = Some(vec![
                    (name.clone(), set.clone()),
                    (format!("X_{}", q.vertex_name(alpha_src)), rep.vertex_support(alpha_src)),
                ]);
            }
        }
    }
    if let Some(c) = control {
        let clash = first_overlap(&c);
        report.check("control: a translate and its enclosing vertex set", false, clash.is_none(), Some(0.0), clash);
    }
    Ok(report.finish())
}

/// Compares `‖ρ(a)‖` with `‖ρ_#(φ_#(a))‖` for the extensions along source
/// removal and desingularization truncated at `depth`.
pub fn seminorm_move_invariance(
    q: &Quiver,
    p: f64,
    elements: &[LpaElement],
    depth: usize,
    opts: &ExperimentOptions,
) -> Result<ExperimentReport> {
    let alg = LeavittAlgebra::new(q.clone());
    let names: Vec<String> = elements.iter().map(|x| alg.format(x)).collect();
    let mut report = ExperimentReport::new("move-invariance", q);
    report.inputs.p = Some(p);
    report.inputs.depths = vec![depth];
    report.inputs.elements = names.clone();
    let tol = 1e-7;
    let rep = boundary_path_rep(q, p, depth)?;
    let base: Vec<NormBounds> = elements.iter().map(|x| rep.interior_norm(x, &opts.norm)).collect::<Result<_>>()?;
    for (name, b) in names.iter().zip(&base) {
        report.records.push(record(name.clone(), "boundary".into(), Some(depth), b));
    }
    let mut last = None;
    for (kind, label) in
        [(MoveKind::SourceRemoval, "source-removal"), (MoveKind::Desingularization, "desingularization")]
    {
        let ext = extend_along_move(&rep, kind, depth)?;
        if ext.map.attachments.is_empty() {
            report.notes.push(format!("{label}: no attachments, the move is the identity"));
        }
        let mut worst = None;
        let mut gap: f64 = 0.0;
        for ((x, name), b) in elements.iter().zip(&names).zip(&base) {
            let e = ext.rep.interior_norm(x, &opts.norm)?;
            report.records.push(record(name.clone(), label.into(), Some(depth), &e));
            let s = separation(b, &e);
            if s > gap || (!b.overlaps(&e, tol) && worst.is_none()) {
                gap = s;
                worst = Some(name.clone());
            }
        }
        report.check(
            format!("{label}: norms agree"),
            true,
            elements
                .iter()
                .zip(&base)
                .all(|(x, b)| ext.rep.interior_norm(x, &opts.norm).map(|e| b.overlaps(&e, tol)).unwrap_or(false)),
            Some(tol),
            worst,
        );
        let dev = ext.deviation(&rep, elements);
        report.check(
            format!("{label}: images extend the original"),
            true,
            dev == 0.0,
            Some(0.0),
            Some(format!("{dev:e}")),
        );
        last = Some(ext);
    }
    if let (Some(ext), Some((x, b))) = (last, elements.iter().zip(&base).find(|(_, b)| b.lower > tol)) {
        let two = alg.scalar(GaussianRational::from_integer(2));
        let e = ext.rep.interior_norm(&alg.mul(&two, x), &opts.norm)?;
        report.check("control: doubled element agrees", false, b.overlaps(&e, tol), Some(tol), Some(alg.format(x)));
    } else {
        report.notes.push("no element with positive norm; control skipped".to_string());
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests;
