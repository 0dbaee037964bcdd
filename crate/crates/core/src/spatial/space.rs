//! Finite measure spaces, spatial systems and the matrices they induce.

use std::collections::HashMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::matrix::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, rational_to_string};

/// Moduli and phases are compared to this tolerance.
pub const SPATIAL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub label: String,
    pub weight: BigRational,
}

/// Finitely many labelled atoms with positive rational weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMeasureSpace {
    atoms: Vec<Atom>,
    index: HashMap<String, usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AtomJson {
    pub label: String,
    pub weight: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SpaceJson {
    pub atoms: Vec<AtomJson>,
}

impl FiniteMeasureSpace {
    pub fn new(atoms: Vec<Atom>) -> Result<FiniteMeasureSpace> {
        let mut index = HashMap::with_capacity(atoms.len());
        for (i, a) in atoms.iter().enumerate() {
            if !a.weight.is_positive() {
                return Err(Error::precondition(format!("atom `{}` has nonpositive weight", a.label)));
            }
            if index.insert(a.label.clone(), i).is_some() {
                return Err(Error::precondition(format!("duplicate atom label `{}`", a.label)));
            }
        }
        Ok(FiniteMeasureSpace { atoms, index })
    }

    /// Counting measure on the given labels.
    pub fn counting<I, S>(labels: I) -> Result<FiniteMeasureSpace>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        FiniteMeasureSpace::new(
            labels.into_iter().map(|l| Atom { label: l.into(), weight: BigRational::one() }).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn label(&self, i: usize) -> &str {
        &self.atoms[i].label
    }

    pub fn weight(&self, i: usize) -> &BigRational {
        &self.atoms[i].weight
    }

    pub fn weight_f64(&self, i: usize) -> f64 {
        self.atoms[i].weight.to_f64().unwrap_or(f64::NAN)
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.weight_f64(i)).collect()
    }

    pub fn is_counting(&self) -> bool {
        self.atoms.iter().all(|a| a.weight.is_one())
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// The atoms `keep`, in that order.
    pub fn restrict(&self, keep: &[usize]) -> FiniteMeasureSpace {
        FiniteMeasureSpace::new(keep.iter().map(|&i| self.atoms[i].clone()).collect())
            .expect("sub-space of a valid space")
    }

    /// `self × other`, atom `(i, k)` at index `i·|other| + k`.
    pub fn product(&self, other: &FiniteMeasureSpace) -> FiniteMeasureSpace {
        let mut atoms = Vec::with_capacity(self.len() * other.len());
        for a in &self.atoms {
            for b in &other.atoms {
                atoms.push(Atom { label: format!("({},{})", a.label, b.label), weight: &a.weight * &b.weight });
            }
        }
        FiniteMeasureSpace::new(atoms).expect("product labels are distinct")
    }

    pub fn to_json(&self) -> SpaceJson {
        SpaceJson {
            atoms: self
                .atoms
                .iter()
                .map(|a| AtomJson { label: a.label.clone(), weight: rational_to_string(&a.weight) })
                .collect(),
        }
    }

    pub fn from_json(j: &SpaceJson) -> Result<FiniteMeasureSpace> {
        let mut atoms = Vec::with_capacity(j.atoms.len());
        for a in &j.atoms {
            atoms.push(Atom { label: a.label.clone(), weight: parse_rational(&a.weight)? });
        }
        FiniteMeasureSpace::new(atoms)
    }
}

/// `(S, A, B, h)` on atoms: `S(x) = y` for each pair `(x, y)`, phase `h(y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpatialSystem {
    pub pairs: Vec<(usize, usize)>,
    pub phases: Vec<Complex64>,
}

impl SpatialSystem {
    pub fn identity(n: usize) -> SpatialSystem {
        SpatialSystem { pairs: (0..n).map(|i| (i, i)).collect(), phases: vec![Complex64::new(1.0, 0.0); n] }
    }

    /// Phase-one system from `S`.
    pub fn from_map(pairs: Vec<(usize, usize)>) -> SpatialSystem {
        let phases = vec![Complex64::new(1.0, 0.0); pairs.len()];
        SpatialSystem { pairs, phases }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.pairs.len() != self.phases.len() {
            return Err(Error::precondition("one phase per pair required"));
        }
        let mut seen_x = vec![false; n];
        let mut seen_y = vec![false; n];
        for &(x, y) in &self.pairs {
            if x >= n || y >= n {
                return Err(Error::precondition("system refers to a missing atom"));
            }
            if std::mem::replace(&mut seen_x[x], true) || std::mem::replace(&mut seen_y[y], true) {
                return Err(Error::precondition("set transformation is not injective"));
            }
        }
        if self.phases.iter().any(|h| (h.norm() - 1.0).abs() > SPATIAL_TOL) {
            return Err(Error::precondition("phase is not unimodular"));
        }
        Ok(())
    }

    pub fn domain(&self) -> Vec<usize> {
        self.pairs.iter().map(|&(x, _)| x).collect()
    }

    pub fn range(&self) -> Vec<usize> {
        self.pairs.iter().map(|&(_, y)| y).collect()
    }

    /// `(S⁻¹, B, A, conj(h)∘S)`.
    pub fn inverse(&self) -> SpatialSystem {
        SpatialSystem {
            pairs: self.pairs.iter().map(|&(x, y)| (y, x)).collect(),
            phases: self.phases.iter().map(|h| h.conj()).collect(),
        }
    }
}

/// A square matrix over a space, optionally certified spatial.
#[derive(Clone, Debug, PartialEq)]
pub struct SpatialMatrix {
    pub matrix: CMatrix,
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub system: SpatialSystem,
    pub p: f64,
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::precondition(format!("exponent p = {p} must lie in [1, ∞)")));
    }
    Ok(())
}

/// `h(y)·(μ(x)/μ(y))^{1/p}` at `(S(x), x)`, zero elsewhere.
pub fn spatial_from_system(sys: &SpatialSystem, p: f64, space: &FiniteMeasureSpace) -> Result<SpatialMatrix> {
    check_p(p)?;
    sys.validate(space.len())?;
    let n = space.len();
    let mut m = CMatrix::zeros(n, n);
    for (&(x, y), &h) in sys.pairs.iter().zip(&sys.phases) {
        m.set(y, x, h * weight_factor(space, x, y, p));
    }
    Ok(SpatialMatrix { matrix: m, certificate: Some(Certificate { system: sys.clone(), p }) })
}

/// `(μ(x)/μ(y))^{1/p}`.
fn weight_factor(space: &FiniteMeasureSpace, x: usize, y: usize, p: f64) -> f64 {
    if space.weight(x) == space.weight(y) {
        1.0
    } else {
        (space.weight(x) / space.weight(y)).to_f64().unwrap_or(f64::NAN).powf(1.0 / p)
    }
}

impl SpatialMatrix {
    pub fn uncertified(matrix: CMatrix) -> SpatialMatrix {
        SpatialMatrix { matrix, certificate: None }
    }

    pub fn is_certified(&self) -> bool {
        self.certificate.is_some()
    }

    /// The spatial partial isometry of the inverse system.
    pub fn reverse(&self, space: &FiniteMeasureSpace) -> Result<SpatialMatrix> {
        let cert =
            self.certificate.as_ref().ok_or_else(|| Error::precondition("reverse needs a spatial certificate"))?;
        spatial_from_system(&cert.system.inverse(), cert.p, space)
    }
}

/// Recovers `(S, A, B, h)` when `m` has at most one nonzero per row and
/// column, each of modulus `(μ(x)/μ(y))^{1/p}`.
pub fn is_spatial_partial_isometry(m: &CMatrix, p: f64, space: &FiniteMeasureSpace) -> Option<SpatialSystem> {
    if !m.is_square() || m.rows() != space.len() || check_p(p).is_err() {
        return None;
    }
    let mut col_used = vec![false; m.cols()];
    let mut pairs = Vec::new();
    let mut phases = Vec::new();
    for y in 0..m.rows() {
        let row: Vec<(usize, Complex64)> = m.row(y).iter().copied().filter(|(_, z)| z.norm() > SPATIAL_TOL).collect();
        match row.as_slice() {
            [] => {}
            [(x, z)] => {
                if std::mem::replace(&mut col_used[*x], true) {
                    return None;
                }
                let expected = weight_factor(space, *x, y, p);
                if (z.norm() - expected).abs() > SPATIAL_TOL * expected.max(1.0) {
                    return None;
                }
                pairs.push((*x, y));
                phases.push(z / z.norm());
            }
            _ => return None,
        }
    }
    Some(SpatialSystem { pairs, phases })
}

/// Matrix interchange format: row-major `[re, im]` pairs plus the space.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub space: Option<SpaceJson>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix, space: Option<&FiniteMeasureSpace>) -> MatrixJson {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            data: m.to_dense_rows().into_iter().flatten().map(|z| [z.re, z.im]).collect(),
            space: space.map(FiniteMeasureSpace::to_json),
        }
    }

    pub fn to_matrix(&self) -> Result<(CMatrix, Option<FiniteMeasureSpace>)> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::precondition("matrix data length does not match its shape"));
        }
        let m = CMatrix::from_triplets(
            self.rows,
            self.cols,
            self.data.iter().enumerate().filter_map(|(k, &[re, im])| {
                let z = Complex64::new(re, im);
                (z != Complex64::new(0.0, 0.0)).then_some((k / self.cols, k % self.cols, z))
            }),
        );
        let space = self.space.as_ref().map(FiniteMeasureSpace::from_json).transpose()?;
        if let Some(s) = &space {
            if s.len() != self.rows || self.rows != self.cols {
                return Err(Error::precondition("space size does not match the matrix"));
            }
        }
        Ok((m, space))
    }
}
