//! Exact arithmetic in the Leavitt path algebra `L_Q` over `Q(i)`.
//!
//! Elements are kept in the span of irreducible monomials: `αβ*` is
//! reducible when `α = α'γ`, `β = β'γ` for the special edge `γ` of
//! `s(γ)`. Reduction applies the Cuntz-Krieger sum relation backwards:
//!
//! ```text
//! (α'γ)(β'γ)*  ->  α'β'* - Σ_{e ∈ s⁻¹(v), e ≠ γ} (α'e)(β'e)*
//! ```
//!
//! Each rewrite removes one reducible monomial and introduces only a shorter
//! one plus irreducible ones, so reduction terminates. Irreducible monomials
//! form a linear basis, which makes structural equality exact equality.

mod level;
mod monomial;
pub mod sample;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::{EdgeId, Path, Quiver, VertexId};
use crate::scalar::GaussianRational;

pub use level::{Block, LevelTerm};
pub use monomial::Monomial;

/// A finite linear combination of monomials with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LpaElement {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl LpaElement {
    pub fn zero() -> LpaElement {
        LpaElement::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &GaussianRational) -> LpaElement {
        if c.is_zero() {
            return LpaElement::zero();
        }
        LpaElement { terms: self.terms.iter().map(|(m, x)| (m.clone(), c * x)).collect() }
    }

    /// `αβ* ↦ βα*` with conjugated coefficients. Irreducibility is symmetric
    /// in `α, β`, so the result is already reduced.
    pub fn star(&self) -> LpaElement {
        LpaElement { terms: self.terms.iter().map(|(m, c)| (m.star(), c.conj())).collect() }
    }

    /// Homogeneous components keyed by `|α| - |β|`.
    pub fn grade_decompose(&self) -> BTreeMap<i64, LpaElement> {
        let mut out: BTreeMap<i64, LpaElement> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree()).or_default().terms.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn is_homogeneous(&self) -> Option<i64> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let d = degrees.next().unwrap_or(0);
        degrees.all(|x| x == d).then_some(d)
    }

    /// Longest `|α|` or `|β|` among the terms.
    pub fn max_path_len(&self) -> usize {
        self.terms.keys().map(|m| m.alpha().len().max(m.beta().len())).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(c.clone());
            }
        }
    }

    fn add_assign_ref(&mut self, other: &LpaElement) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }
}

impl Add for LpaElement {
    type Output = LpaElement;
    fn add(mut self, rhs: LpaElement) -> LpaElement {
        self.add_assign_ref(&rhs);
        self
    }
}

impl<'a> Add<&'a LpaElement> for &'a LpaElement {
    type Output = LpaElement;
    fn add(self, rhs: &LpaElement) -> LpaElement {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Neg for LpaElement {
    type Output = LpaElement;
    fn neg(self) -> LpaElement {
        LpaElement { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Sub for LpaElement {
    type Output = LpaElement;
    fn sub(self, rhs: LpaElement) -> LpaElement {
        self + (-rhs)
    }
}

impl<'a> Sub<&'a LpaElement> for &'a LpaElement {
    type Output = LpaElement;
    fn sub(self, rhs: &LpaElement) -> LpaElement {
        self + &(-rhs.clone())
    }
}

/// A quiver with a fixed linear basis of its Leavitt path algebra.
///
/// With `ck2` off the same machinery computes in the Cohn algebra, where
/// no reduction happens.
#[derive(Clone, Debug)]
pub struct LeavittAlgebra {
    quiver: Quiver,
    special: Vec<Option<EdgeId>>,
    ck2: bool,
}

/// One term of the serialized element format.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermJson {
    pub alpha: Vec<String>,
    pub beta: Vec<String>,
    /// Common range vertex; needed to place length-zero paths.
    pub range: String,
    pub re: String,
    pub im: String,
}

impl LeavittAlgebra {
    /// Special edge = first declared edge at each regular vertex.
    pub fn new(quiver: Quiver) -> LeavittAlgebra {
        let special = quiver.vertices().map(|v| quiver.out_edges(v).first().copied()).collect();
        LeavittAlgebra { quiver, special, ck2: true }
    }

    /// Uses `choice(v)` as special edge at each regular vertex `v`.
    pub fn with_special_edges(quiver: Quiver, choice: impl Fn(&Quiver, VertexId) -> EdgeId) -> Result<LeavittAlgebra> {
        let mut special = Vec::with_capacity(quiver.vertex_count());
        for v in quiver.vertices() {
            if quiver.is_sink(v) {
                special.push(None);
                continue;
            }
            let e = choice(&quiver, v);
            if e.index() >= quiver.edge_count() || quiver.src(e) != v {
                return Err(Error::precondition(format!(
                    "special edge at `{}` must start there",
                    quiver.vertex_name(v)
                )));
            }
            special.push(Some(e));
        }
        Ok(LeavittAlgebra { quiver, special, ck2: true })
    }

    /// The Cohn algebra: relations CK1 only.
    pub fn cohn(quiver: Quiver) -> LeavittAlgebra {
        LeavittAlgebra { ck2: false, ..LeavittAlgebra::new(quiver) }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn special_edge(&self, v: VertexId) -> Option<EdgeId> {
        self.special[v.index()]
    }

    pub fn imposes_ck2(&self) -> bool {
        self.ck2
    }

    /// Whether `m` is a basis monomial.
    pub fn is_irreducible(&self, m: &Monomial) -> bool {
        if !self.ck2 {
            return true;
        }
        match (m.alpha().last_edge(), m.beta().last_edge()) {
            (Some(a), Some(b)) if a == b => self.special[self.quiver.src(a).index()] != Some(a),
            _ => true,
        }
    }

    /// One backwards CK2 step on a reducible monomial.
    fn rewrite(&self, m: &Monomial) -> Vec<(Monomial, bool)> {
        let q = &self.quiver;
        let e = m.alpha().last_edge().expect("reducible monomial");
        let v = q.src(e);
        let a = m.alpha().parent(q).expect("nonempty");
        let b = m.beta().parent(q).expect("nonempty");
        let mut out = vec![(Monomial::new(a.clone(), b.clone()).expect("same range"), true)];
        for &f in q.out_edges(v) {
            if f != e {
                let m = Monomial::new(a.extended(q, f), b.extended(q, f)).expect("same range");
                out.push((m, false));
            }
        }
        out
    }

    /// Reduces a raw combination (a Cohn algebra element) to normal form.
    pub fn normal_form<I>(&self, raw: I) -> LpaElement
    where
        I: IntoIterator<Item = (Monomial, GaussianRational)>,
    {
        let mut stack: Vec<(Monomial, GaussianRational)> = raw.into_iter().collect();
        self.reduce_stack(&mut stack, |s| s.pop())
    }

    /// Same as [`normal_form`](Self::normal_form) but with a caller-chosen
    /// processing order; used to exercise confluence.
    pub fn normal_form_with<I, F>(&self, raw: I, pick: F) -> LpaElement
    where
        I: IntoIterator<Item = (Monomial, GaussianRational)>,
        F: FnMut(&mut Vec<(Monomial, GaussianRational)>) -> Option<(Monomial, GaussianRational)>,
    {
        let mut stack: Vec<(Monomial, GaussianRational)> = raw.into_iter().collect();
        self.reduce_stack(&mut stack, pick)
    }

    fn reduce_stack<F>(&self, stack: &mut Vec<(Monomial, GaussianRational)>, mut pick: F) -> LpaElement
    where
        F: FnMut(&mut Vec<(Monomial, GaussianRational)>) -> Option<(Monomial, GaussianRational)>,
    {
        let mut acc: BTreeMap<Monomial, GaussianRational> = BTreeMap::new();
        while let Some((m, c)) = pick(stack) {
            if c.is_zero() {
                continue;
            }
            if self.is_irreducible(&m) {
                *acc.entry(m).or_default() += &c;
                continue;
            }
            for (n, positive) in self.rewrite(&m) {
                stack.push((n, if positive { c.clone() } else { -c.clone() }));
            }
        }
        acc.retain(|_, c| !c.is_zero());
        LpaElement { terms: acc }
    }

    pub fn monomial(&self, m: Monomial) -> LpaElement {
        self.normal_form([(m, GaussianRational::from_integer(1))])
    }

    pub fn vertex(&self, v: VertexId) -> LpaElement {
        self.monomial(Monomial::vertex(v))
    }

    pub fn edge(&self, e: EdgeId) -> LpaElement {
        self.monomial(Monomial::edge(&self.quiver, e))
    }

    pub fn ghost_edge(&self, e: EdgeId) -> LpaElement {
        self.monomial(Monomial::ghost_edge(&self.quiver, e))
    }

    pub fn path(&self, p: Path) -> LpaElement {
        self.monomial(Monomial::path(p))
    }

    pub fn scalar(&self, c: GaussianRational) -> LpaElement {
        self.one().scale(&c)
    }

    /// `Σ_v v`, the unit of `L_Q` for finite `Q`.
    pub fn one(&self) -> LpaElement {
        self.normal_form(self.quiver.vertices().map(|v| (Monomial::vertex(v), GaussianRational::from_integer(1))))
    }

    /// Looks up a generator by name: vertex `v`, edge `e`, or ghost `e*`.
    pub fn generator(&self, name: &str, starred: bool) -> Result<LpaElement> {
        if let Some(e) = self.quiver.edge_id(name) {
            return Ok(if starred { self.ghost_edge(e) } else { self.edge(e) });
        }
        if let Some(v) = self.quiver.vertex_id(name) {
            // vertices are self-adjoint
            return Ok(self.vertex(v));
        }
        Err(Error::UnknownName(name.to_string()))
    }

    pub fn mul(&self, x: &LpaElement, y: &LpaElement) -> LpaElement {
        let mut raw = Vec::with_capacity(x.len() * y.len());
        for (m1, c1) in x.terms() {
            for (m2, c2) in y.terms() {
                if let Some(m) = m1.mul(m2) {
                    raw.push((m, c1 * c2));
                }
            }
        }
        self.normal_form(raw)
    }

    pub fn product<'a>(&self, factors: impl IntoIterator<Item = &'a LpaElement>) -> LpaElement {
        factors.into_iter().fold(self.one(), |acc, f| self.mul(&acc, f))
    }

    pub fn pow(&self, x: &LpaElement, k: u32) -> LpaElement {
        (0..k).fold(self.one(), |acc, _| self.mul(&acc, x))
    }

    pub fn equals(&self, x: &LpaElement, y: &LpaElement) -> bool {
        x == y
    }

    /// Irreducible monomials with `|α|, |β| ≤ max_len`, in sorted order.
    pub fn basis_monomials(&self, max_len: usize) -> Vec<Monomial> {
        let q = &self.quiver;
        let mut out = Vec::new();
        for v in q.vertices() {
            let into_v = q.paths_up_to(max_len, None, Some(v));
            for a in &into_v {
                for b in &into_v {
                    let m = Monomial::new(a.clone(), b.clone()).expect("same range");
                    if self.is_irreducible(&m) {
                        out.push(m);
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Expression-syntax rendering; reparses to the same element.
    pub fn format(&self, x: &LpaElement) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in x.terms().enumerate() {
            let (negative, mag) = split_sign(c);
            match (i, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if mag != GaussianRational::from_integer(1) {
                out.push_str(&mag.to_string());
                out.push('*');
            }
            out.push_str(&m.display(&self.quiver));
        }
        out
    }

    pub fn to_json(&self, x: &LpaElement) -> Vec<TermJson> {
        let q = &self.quiver;
        let names = |p: &Path| p.edges().iter().map(|&e| q.edge_name(e).to_string()).collect();
        x.terms()
            .map(|(m, c)| TermJson {
                alpha: names(m.alpha()),
                beta: names(m.beta()),
                range: q.vertex_name(m.range()).to_string(),
                re: c.re_string(),
                im: c.im_string(),
            })
            .collect()
    }

    pub fn from_json(&self, terms: &[TermJson]) -> Result<LpaElement> {
        let q = &self.quiver;
        let path = |names: &[String], range: VertexId| -> Result<Path> {
            if names.is_empty() {
                return Ok(Path::vertex(range));
            }
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            q.path_from_names(&refs)
        };
        let mut raw = Vec::with_capacity(terms.len());
        for t in terms {
            let range = q.vertex_id(&t.range).ok_or_else(|| Error::UnknownName(t.range.clone()))?;
            let a = path(&t.alpha, range)?;
            let b = path(&t.beta, range)?;
            let m = Monomial::new(a, b)
                .filter(|m| m.range() == range)
                .ok_or_else(|| Error::precondition("term paths do not share the stated range"))?;
            raw.push((m, GaussianRational::from_strings(&t.re, &t.im)?));
        }
        Ok(self.normal_form(raw))
    }
}

/// `(true, -c)` when `c` reads naturally with a leading minus.
fn split_sign(c: &GaussianRational) -> (bool, GaussianRational) {
    use num_traits::Signed;
    let negative = if c.im.is_zero() { c.re.is_negative() } else { c.re.is_zero() && c.im.is_negative() };
    if negative {
        (true, -c.clone())
    } else {
        (false, c.clone())
    }
}

#[cfg(test)]
mod tests;
