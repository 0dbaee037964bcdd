//! Certified bounds for the `p → p` operator norm of a complex matrix.
//!
//! The matrix is split into connected components of its bipartite support;
//! the norm of a direct sum is the largest summand norm. Each component is
//! bounded from above by exact anchors (`p = 1`, `2`, `∞`), Riesz-Thorin
//! interpolation between them, and a Schur test on `|A|`; from below by
//! Boyd's nonlinear power iteration, whose Rayleigh ratio never decreases.
//! Several structured cases are solved exactly.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::matrix::CMatrix;
use super::space::{FiniteMeasureSpace, SpatialMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct NormOptions {
    /// Random starts for the power iteration, on top of the canonical ones.
    pub restarts: usize,
    pub seed: u64,
    /// `upper - lower ≤ tol·max(1, upper)` marks the interval certified.
    pub tol: f64,
    pub max_iter: usize,
    /// Largest component handed to a dense SVD.
    pub dense_limit: usize,
    /// Most basis vectors tried as canonical starts.
    pub canonical_limit: usize,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions { restarts: 32, seed: 0, tol: 1e-7, max_iter: 400, dense_limit: 300, canonical_limit: 64 }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct NormBounds {
    pub lower: f64,
    pub upper: f64,
    pub lower_method: String,
    pub upper_method: String,
    pub certified: bool,
    /// Realizes `lower`: `‖Mx‖_p / ‖x‖_p = lower` in the space's own coordinates.
    #[serde(skip)]
    pub witness: Vec<Complex64>,
}

impl NormBounds {
    fn exact(value: f64, method: &str, witness: Vec<Complex64>) -> NormBounds {
        NormBounds {
            lower: value,
            upper: value,
            lower_method: method.to_string(),
            upper_method: method.to_string(),
            certified: true,
            witness,
        }
    }

    fn zero(cols: usize) -> NormBounds {
        NormBounds::exact(0.0, "zero", vec![Complex64::new(0.0, 0.0); cols])
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    /// The two intervals meet after widening each by `tol`.
    pub fn overlaps(&self, other: &NormBounds, tol: f64) -> bool {
        self.lower <= other.upper + tol && other.lower <= self.upper + tol
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.lower - tol <= x && x <= self.upper + tol
    }
}

fn certified(lower: f64, upper: f64, tol: f64) -> bool {
    upper - lower <= tol * upper.max(1.0)
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::precondition(format!("exponent p = {p} must lie in [1, ∞)")));
    }
    Ok(())
}

/// `‖x‖_p` for the counting measure.
pub fn pnorm(x: &[Complex64], p: f64) -> f64 {
    if p == 1.0 {
        return x.iter().map(|z| z.norm()).sum();
    }
    if p == 2.0 {
        return x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    }
    let m = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if m == 0.0 {
        return 0.0;
    }
    m * x.iter().map(|z| (z.norm() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// `|z|^{q-1} sign(z)`, with `sign(0) = 0`.
fn psi(z: Complex64, q: f64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        Complex64::new(0.0, 0.0)
    } else if q == 2.0 {
        z
    } else {
        z * (r.powf(q - 2.0))
    }
}

fn conjugate_exponent(p: f64) -> f64 {
    p / (p - 1.0)
}

fn ratio(a: &CMatrix, x: &[Complex64], p: f64) -> f64 {
    let d = pnorm(x, p);
    if d == 0.0 {
        0.0
    } else {
        pnorm(&a.matvec(x), p) / d
    }
}

fn normalize(x: &mut [Complex64], p: f64) -> bool {
    let n = pnorm(x, p);
    if n == 0.0 || !n.is_finite() {
        return false;
    }
    for z in x.iter_mut() {
        *z /= n;
    }
    true
}

/// Runs `x ← Ψ_{p'}(Aᴴ Ψ_p(A x))` and returns the Rayleigh ratio after
/// each step (the first entry is the start's ratio). For `p > 1` the
/// sequence is nondecreasing in exact arithmetic.
pub fn boyd_trace(a: &CMatrix, x0: &[Complex64], p: f64, iters: usize) -> Vec<f64> {
    let mut x = x0.to_vec();
    let mut out = vec![ratio(a, &x, p)];
    for _ in 0..iters {
        if !boyd_step(a, &mut x, p) {
            break;
        }
        out.push(ratio(a, &x, p));
    }
    out
}

fn boyd_step(a: &CMatrix, x: &mut Vec<Complex64>, p: f64) -> bool {
    let q = conjugate_exponent(p);
    let y: Vec<Complex64> = a.matvec(x).into_iter().map(|z| psi(z, p)).collect();
    let mut w: Vec<Complex64> = a.adjoint_matvec(&y).into_iter().map(|z| psi(z, q)).collect();
    if !normalize(&mut w, p) {
        return false;
    }
    *x = w;
    true
}

/// Best ratio reached from `x0`, with its vector.
fn boyd(a: &CMatrix, x0: Vec<Complex64>, p: f64, max_iter: usize) -> (f64, Vec<Complex64>) {
    let mut x = x0;
    if !normalize(&mut x, p) {
        return (0.0, x);
    }
    let mut best = ratio(a, &x, p);
    let mut best_x = x.clone();
    for _ in 0..max_iter {
        if !boyd_step(a, &mut x, p) {
            break;
        }
        let r = ratio(a, &x, p);
        debug_assert!(r >= best * (1.0 - 1e-9), "power iteration ratio decreased: {best} -> {r}");
        let gain = r - best;
        if r > best {
            best = r;
            best_x = x.clone();
        }
        if gain <= 1e-15 * best.max(1e-300) {
            break;
        }
    }
    (best, best_x)
}

/// `(max_j (Bᵀ(Bx)^{p-1})_j / x_j^{p-1})^{1/p}` for nonnegative `B` and
/// positive `x`: an upper bound for `‖B‖_p` by Hölder's inequality.
fn schur_bound(b: &CMatrix, x: &[f64], p: f64) -> f64 {
    let xc: Vec<Complex64> = x.iter().map(|&t| Complex64::new(t, 0.0)).collect();
    let y: Vec<Complex64> =
        b.matvec(&xc).into_iter().map(|z| Complex64::new(z.re.max(0.0).powf(p - 1.0), 0.0)).collect();
    let t = b.adjoint_matvec(&y);
    let mut worst: f64 = 0.0;
    for (j, tj) in t.iter().enumerate() {
        if tj.re <= 0.0 {
            continue;
        }
        if x[j] <= 0.0 {
            return f64::INFINITY;
        }
        worst = worst.max(tj.re / x[j].powf(p - 1.0));
    }
    worst.powf(1.0 / p)
}

/// Power iteration on `B = |A|` from the all-ones vector. Returns the best
/// Schur bound seen and the final (positive) iterate.
fn perron(b: &CMatrix, p: f64, max_iter: usize, target: f64) -> (f64, Vec<f64>) {
    let n = b.cols();
    let mut x = vec![1.0f64; n];
    let mut best_upper = schur_bound(b, &x, p);
    let q = conjugate_exponent(p);
    for _ in 0..max_iter {
        let xc: Vec<Complex64> = x.iter().map(|&t| Complex64::new(t, 0.0)).collect();
        let y: Vec<Complex64> =
            b.matvec(&xc).into_iter().map(|z| Complex64::new(z.re.max(0.0).powf(p - 1.0), 0.0)).collect();
        let w = b.adjoint_matvec(&y);
        let mut next: Vec<f64> = w.iter().map(|z| z.re.max(0.0).powf(q - 1.0)).collect();
        let norm = next.iter().map(|t| t.powf(p)).sum::<f64>().powf(1.0 / p);
        if norm == 0.0 || !norm.is_finite() {
            break;
        }
        for t in &mut next {
            *t = (*t / norm).max(f64::MIN_POSITIVE);
        }
        x = next;
        let u = schur_bound(b, &x, p);
        best_upper = best_upper.min(u);
        let xc: Vec<Complex64> = x.iter().map(|&t| Complex64::new(t, 0.0)).collect();
        if best_upper - ratio(b, &xc, p) <= target * best_upper.max(1.0) {
            break;
        }
    }
    (best_upper, x)
}

/// Unimodular `d` (rows) and `g` (columns) with `A = diag(d)·|A|·diag(g)`,
/// if they exist. Found by propagating phases along a spanning tree and
/// then checking every entry.
fn phase_balance(a: &CMatrix) -> Option<(Vec<Complex64>, Vec<Complex64>)> {
    let (r, c) = (a.rows(), a.cols());
    let t = a.transpose();
    let one = Complex64::new(1.0, 0.0);
    let mut d: Vec<Option<Complex64>> = vec![None; r];
    let mut g: Vec<Option<Complex64>> = vec![None; c];
    for start in 0..c {
        if g[start].is_some() {
            continue;
        }
        g[start] = Some(one);
        let mut stack = vec![(false, start)];
        while let Some((is_row, k)) = stack.pop() {
            if is_row {
                let di = d[k].expect("assigned");
                for &(j, z) in a.row(k) {
                    if g[j].is_none() {
                        // z = d_i |z| g_j
                        g[j] = Some(z / (z.norm() * di));
                        stack.push((false, j));
                    }
                }
            } else {
                let gj = g[k].expect("assigned");
                for &(i, z) in t.row(k) {
                    if d[i].is_none() {
                        d[i] = Some(z / (z.norm() * gj));
                        stack.push((true, i));
                    }
                }
            }
        }
    }
    let d: Vec<Complex64> = d.into_iter().map(|x| x.unwrap_or(one)).collect();
    let g: Vec<Complex64> = g.into_iter().map(|x| x.unwrap_or(one)).collect();
    for (i, j, z) in a.entries() {
        if (d[i] * z.norm() * g[j] - z).norm() > 1e-12 * z.norm().max(1.0) {
            return None;
        }
    }
    Some((d, g))
}

fn basis(n: usize, j: usize) -> Vec<Complex64> {
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    x[j] = Complex64::new(1.0, 0.0);
    x
}

/// Largest singular value and a right singular vector.
fn svd_top(a: &CMatrix) -> (f64, Vec<Complex64>) {
    let svd = a.to_dense().svd(false, true);
    let (k, s) = svd.singular_values.iter().copied().enumerate().fold((0, f64::NEG_INFINITY), |acc, (k, s)| {
        if s > acc.1 {
            (k, s)
        } else {
            acc
        }
    });
    let v_t = svd.v_t.expect("requested");
    let x: Vec<Complex64> = v_t.row(k).iter().map(|z| z.conj()).collect();
    (s.max(0.0), x)
}

struct Component {
    lower: f64,
    upper: f64,
    lower_method: &'static str,
    upper_method: &'static str,
    witness: Vec<Complex64>,
}

impl Component {
    fn exact(v: f64, method: &'static str, witness: Vec<Complex64>) -> Component {
        Component { lower: v, upper: v, lower_method: method, upper_method: method, witness }
    }
}

fn solve_component(a: &CMatrix, p: f64, opts: &NormOptions) -> Component {
    let (r, c) = (a.rows(), a.cols());
    let col_counts = {
        let mut k = vec![0usize; c];
        for (_, j, _) in a.entries() {
            k[j] += 1;
        }
        k
    };
    let rows_single = (0..r).all(|i| a.row(i).len() <= 1);
    let cols_single = col_counts.iter().all(|&k| k <= 1);

    // Each row reads one column: ‖Ax‖_p^p = Σ_j (Σ_i |a_ij|^p) |x_j|^p.
    if rows_single {
        let mut sums = vec![0.0f64; c];
        for (_, j, z) in a.entries() {
            sums[j] += z.norm().powf(p);
        }
        let (j, s) = argmax(&sums);
        return Component::exact(s.powf(1.0 / p), "disjoint-rows", basis(c, j));
    }
    if p == 1.0 {
        let mut sums = vec![0.0f64; c];
        for (_, j, z) in a.entries() {
            sums[j] += z.norm();
        }
        let (j, s) = argmax(&sums);
        return Component::exact(s, "column-sum", basis(c, j));
    }
    let q = conjugate_exponent(p);
    // Each column feeds one row: the norm is the largest ℓ^{p'} row norm.
    if cols_single {
        let norms: Vec<f64> = (0..r).map(|i| pnorm(&a.row(i).iter().map(|&(_, z)| z).collect::<Vec<_>>(), q)).collect();
        let (i, s) = argmax(&norms);
        let mut x = vec![Complex64::new(0.0, 0.0); c];
        for &(j, z) in a.row(i) {
            x[j] = psi(z.conj(), q);
        }
        normalize(&mut x, p);
        return Component::exact(s, "disjoint-columns", x);
    }

    let n1 = a.norm1();
    let ninf = a.norm_inf();
    let dense_ok = r.max(c) <= opts.dense_limit;
    let svd = dense_ok.then(|| svd_top(a));
    if p == 2.0 {
        if let Some((s, x)) = svd {
            let lower = ratio(a, &x, 2.0).min(s);
            return Component { lower, upper: s.max(lower), lower_method: "svd", upper_method: "svd", witness: x };
        }
    }

    // upper bounds
    let mut upper = n1.powf(1.0 / p) * ninf.powf(1.0 - 1.0 / p);
    let mut upper_method = "interpolation-1-inf";
    let n2 = svd.as_ref().map_or((n1 * ninf).sqrt(), |(s, _)| *s * (1.0 + 1e-14));
    let rt2 = if p < 2.0 {
        let theta = 2.0 - 2.0 / p;
        n1.powf(1.0 - theta) * n2.powf(theta)
    } else {
        let theta = 1.0 - 2.0 / p;
        n2.powf(1.0 - theta) * ninf.powf(theta)
    };
    if rt2 < upper {
        upper = rt2;
        upper_method = if p < 2.0 { "interpolation-1-2" } else { "interpolation-2-inf" };
    }
    let b = a.abs();
    let (schur, perron_x) = perron(&b, p, opts.max_iter, opts.tol * 0.01);
    if schur < upper {
        upper = schur;
        upper_method = "schur";
    }
    let balance = phase_balance(a);

    // lower bounds
    let mut lower = 0.0;
    let mut lower_method = "power-iteration";
    let mut witness = basis(c, 0);
    let consider =
        |x: Vec<Complex64>, method: &'static str, lower: &mut f64, lm: &mut &'static str, w: &mut Vec<Complex64>| {
            let (v, x) = boyd(a, x, p, opts.max_iter);
            if v > *lower {
                *lower = v;
                *lm = method;
                *w = x;
            }
        };
    if let Some((_, g)) = &balance {
        let x: Vec<Complex64> = perron_x.iter().zip(g).map(|(&t, gj)| gj.conj() * t).collect();
        consider(x, "perron-transfer", &mut lower, &mut lower_method, &mut witness);
    }
    if let Some((_, x)) = &svd {
        consider(x.clone(), "power-iteration", &mut lower, &mut lower_method, &mut witness);
    }
    let done = |lower: f64| certified(lower, upper, opts.tol * 0.5);
    if !done(lower) {
        consider(vec![Complex64::new(1.0, 0.0); c], "power-iteration", &mut lower, &mut lower_method, &mut witness);
    }
    if !done(lower) {
        let mut col_norms: Vec<(usize, f64)> = (0..c).map(|j| (j, 0.0)).collect();
        for (_, j, z) in a.entries() {
            col_norms[j].1 += z.norm().powf(p);
        }
        col_norms.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
        for &(j, _) in col_norms.iter().take(opts.canonical_limit) {
            consider(basis(c, j), "power-iteration", &mut lower, &mut lower_method, &mut witness);
            if done(lower) {
                break;
            }
        }
    }
    if !done(lower) {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.restarts {
            let x: Vec<Complex64> =
                (0..c).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            consider(x, "power-iteration", &mut lower, &mut lower_method, &mut witness);
            if done(lower) {
                break;
            }
        }
    }
    // rounding can push the realized ratio a hair past an exact anchor
    if lower > upper {
        upper = lower;
    }
    Component { lower, upper, lower_method, upper_method, witness }
}

fn argmax(xs: &[f64]) -> (usize, f64) {
    xs.iter().copied().enumerate().fold((0, f64::NEG_INFINITY), |acc, (k, s)| if s > acc.1 { (k, s) } else { acc })
}

/// Row and column index sets of the connected pieces of the support.
fn components(a: &CMatrix) -> Vec<(Vec<usize>, Vec<usize>)> {
    let (r, c) = (a.rows(), a.cols());
    let mut parent: Vec<usize> = (0..r + c).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, j, _) in a.entries() {
        let (x, y) = (find(&mut parent, i), find(&mut parent, r + j));
        if x != y {
            parent[x.max(y)] = x.min(y);
        }
    }
    let mut groups: HashMap<usize, (Vec<usize>, Vec<usize>)> = HashMap::new();
    let mut order = Vec::new();
    for i in 0..r {
        if a.row(i).is_empty() {
            continue;
        }
        let root = find(&mut parent, i);
        groups
            .entry(root)
            .or_insert_with(|| {
                order.push(root);
                (Vec::new(), Vec::new())
            })
            .0
            .push(i);
    }
    for j in 0..c {
        let root = find(&mut parent, r + j);
        if let Some(g) = groups.get_mut(&root) {
            g.1.push(j);
        }
    }
    order.into_iter().map(|k| groups.remove(&k).expect("group")).collect()
}

type ComponentKey = (usize, usize, Vec<(usize, usize, u64, u64)>);

fn component_key(a: &CMatrix) -> ComponentKey {
    (a.rows(), a.cols(), a.entries().map(|(i, j, z)| (i, j, z.re.to_bits(), z.im.to_bits())).collect())
}

/// Bounds `‖M‖` on `L^p(μ)`. Without a space the counting measure is used
/// (and `M` may be rectangular).
pub fn opnorm_p(m: &CMatrix, p: f64, space: Option<&FiniteMeasureSpace>, opts: &NormOptions) -> Result<NormBounds> {
    check_p(p)?;
    let (a, scale) = match space {
        Some(s) if !s.is_counting() => {
            if !m.is_square() || m.rows() != s.len() {
                return Err(Error::precondition("matrix and space sizes differ"));
            }
            // f ↦ f·μ^{1/p} is an isometry onto ℓ^p
            let w: Vec<f64> = s.weights_f64().iter().map(|x| x.powf(1.0 / p)).collect();
            let a = CMatrix::from_triplets(m.rows(), m.cols(), m.entries().map(|(i, j, z)| (i, j, z * (w[i] / w[j]))));
            (a, Some(w))
        }
        Some(s) if m.rows() != s.len() || m.cols() != s.len() => {
            return Err(Error::precondition("matrix and space sizes differ"));
        }
        _ => (m.clone(), None),
    };
    let mut best = NormBounds::zero(a.cols());
    let mut best_upper = (0.0, "zero");
    let mut cache: HashMap<ComponentKey, Component> = HashMap::new();
    for (rs, cs) in components(&a) {
        let sub = a.submatrix(&rs, &cs);
        let key = component_key(&sub);
        let comp = cache.entry(key).or_insert_with(|| solve_component(&sub, p, opts));
        if comp.lower > best.lower || best.lower_method == "zero" {
            let mut w = vec![Complex64::new(0.0, 0.0); a.cols()];
            for (k, &j) in cs.iter().enumerate() {
                w[j] = comp.witness[k];
            }
            best.lower = comp.lower;
            best.lower_method = comp.lower_method.to_string();
            best.witness = w;
        }
        if comp.upper > best_upper.0 || best_upper.1 == "zero" {
            best_upper = (comp.upper, comp.upper_method);
        }
    }
    best.upper = best_upper.0.max(best.lower);
    best.upper_method = best_upper.1.to_string();
    best.certified = certified(best.lower, best.upper, opts.tol);
    if let Some(w) = scale {
        for (z, s) in best.witness.iter_mut().zip(w) {
            *z /= s;
        }
    }
    Ok(best)
}

/// Like [`opnorm_p`], but a certificate for the same exponent settles the
/// norm: a nonzero spatial partial isometry has norm exactly 1.
pub fn opnorm_spatial(m: &SpatialMatrix, p: f64, space: &FiniteMeasureSpace, opts: &NormOptions) -> Result<NormBounds> {
    check_p(p)?;
    if let Some(cert) = &m.certificate {
        if cert.p == p {
            let n = space.len();
            return Ok(match cert.system.pairs.first() {
                None => NormBounds::zero(n),
                Some(&(x, _)) => {
                    let mut w = basis(n, x);
                    w[x] /= space.weight_f64(x).powf(1.0 / p);
                    NormBounds::exact(1.0, "spatial", w)
                }
            });
        }
    }
    opnorm_p(&m.matrix, p, Some(space), opts)
}

/// Norm of a block-diagonal sum: the largest block norm.
pub fn block_sup_norm<'a>(
    blocks: impl IntoIterator<Item = &'a CMatrix>,
    p: f64,
    opts: &NormOptions,
) -> Result<NormBounds> {
    check_p(p)?;
    let mut out: Option<NormBounds> = None;
    for b in blocks {
        let nb = opnorm_p(b, p, None, opts)?;
        out = Some(match out {
            None => nb,
            Some(cur) => {
                let (lower_src, upper_src) =
                    (if nb.lower > cur.lower { &nb } else { &cur }, if nb.upper > cur.upper { &nb } else { &cur });
                let lower = lower_src.lower;
                let upper = upper_src.upper.max(lower);
                NormBounds {
                    lower,
                    upper,
                    lower_method: lower_src.lower_method.clone(),
                    upper_method: upper_src.upper_method.clone(),
                    certified: certified(lower, upper, opts.tol),
                    witness: Vec::new(),
                }
            }
        });
    }
    Ok(out.unwrap_or_else(|| NormBounds::zero(0)))
}

#[cfg(test)]
mod tests;
