use crate::quiver::{EdgeId, Path, Quiver, VertexId};

/// `αβ*` with `r(α) = r(β)`. Zero is never a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    alpha: Path,
    beta: Path,
}

impl Monomial {
    pub fn new(alpha: Path, beta: Path) -> Option<Monomial> {
        (alpha.dst() == beta.dst()).then_some(Monomial { alpha, beta })
    }

    pub fn vertex(v: VertexId) -> Monomial {
        Monomial { alpha: Path::vertex(v), beta: Path::vertex(v) }
    }

    /// The path `α` itself, i.e. `α r(α)*`.
    pub fn path(alpha: Path) -> Monomial {
        let beta = Path::vertex(alpha.dst());
        Monomial { alpha, beta }
    }

    /// The ghost path `β*`.
    pub fn ghost(beta: Path) -> Monomial {
        let alpha = Path::vertex(beta.dst());
        Monomial { alpha, beta }
    }

    pub fn edge(q: &Quiver, e: EdgeId) -> Monomial {
        Monomial::path(Path::edge(q, e))
    }

    pub fn ghost_edge(q: &Quiver, e: EdgeId) -> Monomial {
        Monomial::ghost(Path::edge(q, e))
    }

    /// `αα*`.
    pub fn idempotent(alpha: Path) -> Monomial {
        Monomial { beta: alpha.clone(), alpha }
    }

    pub fn alpha(&self) -> &Path {
        &self.alpha
    }

    pub fn beta(&self) -> &Path {
        &self.beta
    }

    pub fn into_parts(self) -> (Path, Path) {
        (self.alpha, self.beta)
    }

    /// `s(α)`: the left unit of the monomial.
    pub fn left_vertex(&self) -> VertexId {
        self.alpha.src()
    }

    /// `s(β)`: the right unit.
    pub fn right_vertex(&self) -> VertexId {
        self.beta.src()
    }

    /// `r(α) = r(β)`.
    pub fn range(&self) -> VertexId {
        self.alpha.dst()
    }

    pub fn degree(&self) -> i64 {
        self.alpha.len() as i64 - self.beta.len() as i64
    }

    pub fn is_idempotent(&self) -> bool {
        self.alpha == self.beta
    }

    pub fn star(&self) -> Monomial {
        Monomial { alpha: self.beta.clone(), beta: self.alpha.clone() }
    }

    /// `(αβ*)(γδ*)`: `(αγ')δ*` if `γ = βγ'`, `α(δβ')*` if `β = γβ'`, else 0.
    pub fn mul(&self, other: &Monomial) -> Option<Monomial> {
        if let Some(gamma_rest) = other.alpha.strip_prefix(&self.beta) {
            let alpha = self.alpha.concat(&gamma_rest).expect("ranges agree");
            return Some(Monomial { alpha, beta: other.beta.clone() });
        }
        if let Some(beta_rest) = self.beta.strip_prefix(&other.alpha) {
            let beta = other.beta.concat(&beta_rest).expect("ranges agree");
            return Some(Monomial { alpha: self.alpha.clone(), beta });
        }
        None
    }

    /// Factor list in expression syntax: `α₁ … α_k β_l* … β₁*`, or the
    /// vertex name when both paths are trivial.
    pub fn factors(&self, q: &Quiver) -> Vec<String> {
        if self.alpha.is_vertex() && self.beta.is_vertex() {
            return vec![q.vertex_name(self.alpha.src()).to_string()];
        }
        let mut out: Vec<String> = self.alpha.edges().iter().map(|&e| q.edge_name(e).to_string()).collect();
        out.extend(self.beta.edges().iter().rev().map(|&e| format!("{}*", q.edge_name(e))));
        out
    }

    pub fn display(&self, q: &Quiver) -> String {
        self.factors(q).join(".")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::samples::*;

    fn mono(q: &Quiver, a: &[&str], b: &[&str]) -> Monomial {
        let v = q.vertex_id("v").unwrap();
        let pa = if a.is_empty() { Path::vertex(v) } else { q.path_from_names(a).unwrap() };
        let pb = if b.is_empty() { Path::vertex(v) } else { q.path_from_names(b).unwrap() };
        Monomial::new(pa, pb).unwrap()
    }

    #[test]
    fn mul_examples() {
        let q = r2();
        let aa = mono(&q, &["a"], &["a"]);
        assert_eq!(aa.mul(&aa), Some(aa.clone()));
        let a_star = mono(&q, &[], &["a"]);
        let b = mono(&q, &["b"], &[]);
        assert_eq!(a_star.mul(&b), None);
        let ab = mono(&q, &["a"], &["b"]);
        let ba = mono(&q, &["b"], &["a"]);
        assert_eq!(ab.mul(&ba), Some(aa));
    }

    #[test]
    fn mul_extends_paths() {
        let q = r2();
        // (a b*)(b a a*) = a a a*
        let x = mono(&q, &["a"], &["b"]);
        let y = mono(&q, &["b", "a"], &["a"]);
        assert_eq!(x.mul(&y), Some(mono(&q, &["a", "a"], &["a"])));
        // (a (ba)*)(b) = a a*
        let x = mono(&q, &["a"], &["b", "a"]);
        let y = mono(&q, &["b"], &[]);
        assert_eq!(x.mul(&y), Some(mono(&q, &["a"], &["a"])));
    }

    #[test]
    fn range_condition() {
        let q = a2();
        let e = q.path_from_names(&["e"]).unwrap();
        assert!(Monomial::new(e.clone(), Path::vertex(q.vertex_id("v").unwrap())).is_none());
        assert_eq!(Monomial::path(e.clone()).degree(), 1);
        assert_eq!(Monomial::ghost(e).display(&q), "e*");
    }

    #[test]
    fn factor_order() {
        let q = r2();
        assert_eq!(mono(&q, &["a"], &["b", "a"]).display(&q), "a.a*.b*");
        assert_eq!(mono(&q, &[], &[]).display(&q), "v");
    }
}
