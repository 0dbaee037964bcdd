//! The inverse semigroup `S(Q) = {0} ∪ {αβ*}` and its idempotents `αα*`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lpa::{LeavittAlgebra, LpaElement, Monomial};
use crate::quiver::{Path, PathOrder, Quiver, VertexId};
use crate::reps::Representation;
use crate::scalar::GaussianRational;
use crate::spatial::CMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemigroupElement {
    Zero,
    Mono(Monomial),
}

impl SemigroupElement {
    pub fn mul(&self, other: &SemigroupElement) -> SemigroupElement {
        match (self, other) {
            (SemigroupElement::Mono(a), SemigroupElement::Mono(b)) => {
                a.mul(b).map_or(SemigroupElement::Zero, SemigroupElement::Mono)
            }
            _ => SemigroupElement::Zero,
        }
    }

    pub fn star(&self) -> SemigroupElement {
        match self {
            SemigroupElement::Zero => SemigroupElement::Zero,
            SemigroupElement::Mono(m) => SemigroupElement::Mono(m.star()),
        }
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self) == *self
    }
}

/// `0` (as `None`) or `αα*`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Idempotent(pub Option<Path>);

impl Idempotent {
    pub fn zero() -> Idempotent {
        Idempotent(None)
    }

    pub fn of(path: Path) -> Idempotent {
        Idempotent(Some(path))
    }

    pub fn vertex(v: VertexId) -> Idempotent {
        Idempotent(Some(Path::vertex(v)))
    }

    pub fn path(&self) -> Option<&Path> {
        self.0.as_ref()
    }

    pub fn element(&self) -> SemigroupElement {
        match &self.0 {
            None => SemigroupElement::Zero,
            Some(p) => SemigroupElement::Mono(Monomial::idempotent(p.clone())),
        }
    }

    pub fn mul(&self, other: &Idempotent) -> Idempotent {
        match self.element().mul(&other.element()) {
            SemigroupElement::Zero => Idempotent::zero(),
            SemigroupElement::Mono(m) => {
                debug_assert!(m.is_idempotent());
                Idempotent::of(m.alpha().clone())
            }
        }
    }

    pub fn to_lpa(&self, alg: &LeavittAlgebra) -> LpaElement {
        match &self.0 {
            None => LpaElement::zero(),
            Some(p) => alg.monomial(Monomial::idempotent(p.clone())),
        }
    }
}

/// `p ≤ q` iff `pq = p`.
pub fn idem_leq(p: &Idempotent, q: &Idempotent) -> bool {
    p.mul(q) == *p
}

fn check_below(p: &Idempotent, z: &[Idempotent]) -> Result<()> {
    match z.iter().find(|z| !idem_leq(z, p)) {
        Some(_) => Err(Error::precondition("cover element is not below the covered idempotent")),
        None => Ok(()),
    }
}

/// Extensions `αγ` of `α` of length exactly `depth`, or shorter when they
/// stop at a sink.
fn maximal_extensions(q: &Quiver, alpha: &Path, depth: usize) -> Vec<Path> {
    let mut out = Vec::new();
    let mut stack = vec![alpha.clone()];
    while let Some(b) = stack.pop() {
        if b.len() >= depth || q.is_sink(b.dst()) {
            out.push(b);
            continue;
        }
        for &e in q.out_edges(b.dst()) {
            stack.push(b.extended(q, e));
        }
    }
    out
}

/// Whether every nonzero `q ≤ p` meets some `z ∈ Z`.
///
/// With `D` the longest path in `Z`, it suffices to test the maximal
/// extensions `β` of `p`'s path up to length `D`: any `q = δδ*` below `p`
/// is comparable with one of them, and a `z` of length `≤ D` comparable
/// with such `β` is a prefix of `β`, hence comparable with `δ`.
pub fn is_cover(q: &Quiver, p: &Idempotent, z: &[Idempotent]) -> Result<bool> {
    check_below(p, z)?;
    let alpha = match p.path() {
        None => return Ok(true),
        Some(a) => a,
    };
    let depth = z.iter().filter_map(|z| z.path().map(Path::len)).max().unwrap_or(alpha.len()).max(alpha.len());
    Ok(maximal_extensions(q, alpha, depth).into_iter().all(|beta| {
        z.iter().any(|z| match z.path() {
            None => false,
            Some(g) => g.compare(&beta) != PathOrder::Incomparable,
        })
    }))
}

/// Checks `Σ_{z ∈ Z} z = p` exactly in `L_Q`. `Z` must be an antichain below `p`.
pub fn cover_sum_identity(alg: &LeavittAlgebra, p: &Idempotent, z: &[Idempotent]) -> Result<bool> {
    check_below(p, z)?;
    for (i, a) in z.iter().enumerate() {
        for b in &z[i + 1..] {
            if idem_leq(a, b) || idem_leq(b, a) {
                return Err(Error::precondition("cover elements must be pairwise incomparable"));
            }
        }
    }
    let sum = alg.normal_form(
        z.iter().filter_map(|z| z.path().map(|g| (Monomial::idempotent(g.clone()), GaussianRational::from_integer(1)))),
    );
    Ok(sum == p.to_lpa(alg))
}

/// Translates a cover of `αα*` to a cover of the vertex `r(α)`:
/// `W = α* Z α`.
pub fn translate_cover(p: &Idempotent, z: &[Idempotent]) -> Result<(VertexId, Vec<Idempotent>)> {
    check_below(p, z)?;
    let alpha = p.path().ok_or_else(|| Error::precondition("cannot translate a cover of 0"))?;
    let w = z.iter().map(|z| Idempotent(z.path().map(|g| g.strip_prefix(alpha).expect("z ≤ p")))).collect();
    Ok((alpha.dst(), w))
}

/// All antichain covers of the path `α` whose elements have length at most
/// `max_len`: either `{αα*}` itself, or, at a regular range, a choice of
/// antichain cover below each one-edge extension.
pub fn antichain_covers(q: &Quiver, alpha: &Path, max_len: usize) -> Vec<Vec<Idempotent>> {
    let mut out = vec![vec![Idempotent::of(alpha.clone())]];
    let v = alpha.dst();
    if alpha.len() >= max_len || q.is_sink(v) {
        return out;
    }
    let mut partial: Vec<Vec<Idempotent>> = vec![Vec::new()];
    for &e in q.out_edges(v) {
        let sub = antichain_covers(q, &alpha.extended(q, e), max_len);
        let mut next = Vec::with_capacity(partial.len() * sub.len());
        for base in &partial {
            for s in &sub {
                let mut c = base.clone();
                c.extend(s.iter().cloned());
                next.push(c);
            }
        }
        partial = next;
    }
    out.extend(partial);
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct TightnessSample {
    pub idempotent: String,
    pub cover: Vec<String>,
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TightnessReport {
    pub samples: Vec<TightnessSample>,
    pub max_deviation: f64,
}

fn idempotent_image(rep: &Representation, p: &Idempotent) -> Result<CMatrix> {
    let n = rep.dim();
    let m = match p.path() {
        None => return Ok(CMatrix::zeros(n, n)),
        Some(a) => rep.monomial_image(&Monomial::idempotent(a.clone())),
    };
    if m.matmul(&m).max_abs_diff(&m) > 1e-12 {
        return Err(Error::precondition("image of an idempotent is not idempotent"));
    }
    Ok(m)
}

/// Compares `⋁_{z ∈ Z} ρ(z)` (joins `p ∨ q = p + q - pq`) with `ρ(p)` away
/// from the representation's mask, with a margin of the longest path in use.
pub fn check_tightness(rep: &Representation, samples: &[(Idempotent, Vec<Idempotent>)]) -> Result<TightnessReport> {
    let q = rep.quiver();
    let name = |p: &Idempotent| match p.path() {
        None => "0".to_string(),
        Some(a) => Monomial::idempotent(a.clone()).display(q),
    };
    let n = rep.dim();
    let radius = samples
        .iter()
        .flat_map(|(p, z)| std::iter::once(p).chain(z))
        .filter_map(|i| i.path().map(Path::len))
        .max()
        .unwrap_or(0);
    let mask = rep.mask_with_margin(radius);
    let mut out = Vec::with_capacity(samples.len());
    for (p, z) in samples {
        let target = idempotent_image(rep, p)?;
        let mut join = CMatrix::zeros(n, n);
        for zi in z {
            let m = idempotent_image(rep, zi)?;
            join = &(&join + &m) - &join.matmul(&m);
        }
        let deviation = rep.restrict_to(&join, &mask).max_abs_diff(&rep.restrict_to(&target, &mask));
        out.push(TightnessSample { idempotent: name(p), cover: z.iter().map(name).collect(), deviation });
    }
    let max_deviation = out.iter().map(|s| s.deviation).fold(0.0, f64::max);
    Ok(TightnessReport { samples: out, max_deviation })
}
