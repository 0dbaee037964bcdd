//! Sparse complex matrices, row-major with sorted columns.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Explicit zeros are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, Complex64)>>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> CMatrix {
        CMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> CMatrix {
        CMatrix { rows: n, cols: n, data: (0..n).map(|i| vec![(i, Complex64::new(1.0, 0.0))]).collect() }
    }

    /// Diagonal 0/1 matrix selecting `members`.
    pub fn projection(n: usize, members: impl IntoIterator<Item = usize>) -> CMatrix {
        let mut m = CMatrix::zeros(n, n);
        for i in members {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> CMatrix {
        let mut m = CMatrix::zeros(rows, cols);
        for (i, j, z) in entries {
            let cur = m.get(i, j);
            m.set(i, j, cur + z);
        }
        m
    }

    pub fn from_dense_rows(rows: &[Vec<Complex64>]) -> Result<CMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::precondition("ragged matrix rows"));
        }
        let mut m = CMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            m.data[i] = row.iter().enumerate().filter(|(_, z)| **z != ZERO).map(|(j, z)| (j, *z)).collect();
        }
        Ok(m)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> CMatrix {
        let rows: Vec<Vec<Complex64>> =
            rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
        CMatrix::from_dense_rows(&rows).expect("rectangular")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, Complex64)] {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.data.iter().enumerate().flat_map(|(i, row)| row.iter().map(move |&(j, z)| (i, j, z)))
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        match self.data[i].binary_search_by_key(&j, |&(c, _)| c) {
            Ok(k) => self.data[i][k].1,
            Err(_) => ZERO,
        }
    }

    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        let row = &mut self.data[i];
        match row.binary_search_by_key(&j, |&(c, _)| c) {
            Ok(k) if z == ZERO => {
                row.remove(k);
            }
            Ok(k) => row[k].1 = z,
            Err(_) if z == ZERO => {}
            Err(k) => row.insert(k, (j, z)),
        }
    }

    /// Drops entries with modulus at most `tol`.
    pub fn pruned(&self, tol: f64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| r.iter().copied().filter(|(_, z)| z.norm() > tol).collect()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        if s == ZERO {
            return CMatrix::zeros(self.rows, self.cols);
        }
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|r| r.iter().map(|&(j, z)| (j, z * s)).filter(|(_, z)| *z != ZERO).collect())
                .collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let mut data = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for &(j, z) in row {
                data[j].push((i, z.conj()));
            }
        }
        CMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn transpose(&self) -> CMatrix {
        let mut data = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for &(j, z) in row {
                data[j].push((i, z));
            }
        }
        CMatrix { rows: self.cols, cols: self.rows, data }
    }

    /// Entrywise modulus.
    pub fn abs(&self) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|r| r.iter().map(|&(j, z)| (j, Complex64::new(z.norm(), 0.0))).collect())
                .collect(),
        }
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut scratch = vec![ZERO; other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; other.cols];
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            for &(k, a) in row {
                for &(j, b) in &other.data[k] {
                    if !mark[j] {
                        mark[j] = true;
                        touched.push(j);
                    }
                    scratch[j] += a * b;
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for &j in &touched {
                if scratch[j] != ZERO {
                    out.push((j, scratch[j]));
                }
                scratch[j] = ZERO;
                mark[j] = false;
            }
            touched.clear();
            data.push(out);
        }
        CMatrix { rows: self.rows, cols: other.cols, data }
    }

    fn combine(&self, other: &CMatrix, sign: f64) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch in sum");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut out = Vec::with_capacity(a.len() + b.len());
                let (mut i, mut k) = (0, 0);
                while i < a.len() || k < b.len() {
                    let take_a = k >= b.len() || (i < a.len() && a[i].0 < b[k].0);
                    let take_b = i >= a.len() || (k < b.len() && b[k].0 < a[i].0);
                    let (j, z) = if take_a {
                        i += 1;
                        a[i - 1]
                    } else if take_b {
                        k += 1;
                        (b[k - 1].0, b[k - 1].1 * sign)
                    } else {
                        i += 1;
                        k += 1;
                        (a[i - 1].0, a[i - 1].1 + b[k - 1].1 * sign)
                    };
                    if z != ZERO {
                        out.push((j, z));
                    }
                }
                out
            })
            .collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// `self ⊗ other` with row index `i·other.rows + k`.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let mut m = CMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for (i, row) in self.data.iter().enumerate() {
            for &(j, a) in row {
                for (k, orow) in other.data.iter().enumerate() {
                    for &(l, b) in orow {
                        m.data[i * other.rows + k].push((j * other.cols + l, a * b));
                    }
                }
            }
        }
        for row in &mut m.data {
            row.sort_by_key(|&(c, _)| c);
        }
        m
    }

    /// Rows `rs` and columns `cs`, in the given orders.
    pub fn submatrix(&self, rs: &[usize], cs: &[usize]) -> CMatrix {
        let mut col_pos = vec![usize::MAX; self.cols];
        for (k, &c) in cs.iter().enumerate() {
            col_pos[c] = k;
        }
        let data = rs
            .iter()
            .map(|&r| {
                let mut out: Vec<(usize, Complex64)> = self.data[r]
                    .iter()
                    .filter(|(j, _)| col_pos[*j] != usize::MAX)
                    .map(|&(j, z)| (col_pos[j], z))
                    .collect();
                out.sort_by_key(|&(c, _)| c);
                out
            })
            .collect();
        CMatrix { rows: rs.len(), cols: cs.len(), data }
    }

    /// Places `self` into a larger zero matrix at the given row/column indices.
    pub fn embed(&self, rows: usize, cols: usize, rmap: &[usize], cmap: &[usize]) -> CMatrix {
        let mut m = CMatrix::zeros(rows, cols);
        for (i, j, z) in self.entries() {
            m.data[rmap[i]].push((cmap[j], z));
        }
        for row in &mut m.data {
            row.sort_by_key(|&(c, _)| c);
        }
        m
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.data.iter().map(|row| row.iter().map(|&(j, a)| a * x[j]).sum()).collect()
    }

    /// `selfᴴ x` without forming the adjoint.
    pub fn adjoint_matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.cols];
        for (i, row) in self.data.iter().enumerate() {
            if x[i] == ZERO {
                continue;
            }
            for &(j, a) in row {
                out[j] += a.conj() * x[i];
            }
        }
        out
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(self.rows, self.cols, ZERO);
        for (i, j, z) in self.entries() {
            m[(i, j)] = z;
        }
        m
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> CMatrix {
        let mut out = CMatrix::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if m[(i, j)] != ZERO {
                    out.data[i].push((j, m[(i, j)]));
                }
            }
        }
        out
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<Complex64>> {
        let mut out = vec![vec![ZERO; self.cols]; self.rows];
        for (i, j, z) in self.entries() {
            out[i][j] = z;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().map(|(_, _, z)| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        (self - other).max_abs()
    }

    /// Max column sum of moduli: the 1→1 norm.
    pub fn norm1(&self) -> f64 {
        let mut sums = vec![0.0; self.cols];
        for (_, j, z) in self.entries() {
            sums[j] += z.norm();
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// Max row sum of moduli: the ∞→∞ norm.
    pub fn norm_inf(&self) -> f64 {
        self.data.iter().map(|r| r.iter().map(|(_, z)| z.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(i, j, _)| i == j)
    }
}

impl<'a> Add<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        self.combine(rhs, 1.0)
    }
}

impl<'a> Sub<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        self.combine(rhs, -1.0)
    }
}

impl<'a> Mul<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(seed: u64, r: usize, cols: usize) -> CMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<Complex64>> = (0..r)
            .map(|_| {
                (0..cols)
                    .map(|_| {
                        if rng.gen_bool(0.4) {
                            c(rng.gen_range(-2..=2) as f64, rng.gen_range(-2..=2) as f64)
                        } else {
                            ZERO
                        }
                    })
                    .collect()
            })
            .collect();
        CMatrix::from_dense_rows(&rows).unwrap()
    }

    #[test]
    fn products_match_dense() {
        for seed in 0..20 {
            let a = random_matrix(seed, 4, 5);
            let b = random_matrix(seed + 100, 5, 3);
            let dense = a.to_dense() * b.to_dense();
            assert_eq!((&a * &b).to_dense(), dense);
            assert_eq!(a.adjoint().to_dense(), a.to_dense().adjoint());
            let x: Vec<Complex64> = (0..5).map(|k| c(k as f64, 1.0)).collect();
            let y = a.matvec(&x);
            let dy = a.to_dense() * nalgebra::DVector::from_vec(x.clone());
            assert_eq!(y, dy.iter().copied().collect::<Vec<_>>());
            let z: Vec<Complex64> = (0..4).map(|k| c(1.0, k as f64)).collect();
            assert_eq!(a.adjoint_matvec(&z), a.adjoint().matvec(&z));
        }
    }

    #[test]
    fn sums_cancel_exactly() {
        let a = random_matrix(3, 4, 4);
        assert!((&a - &a).is_zero());
        assert_eq!((&a + &a), a.scale(c(2.0, 0.0)));
    }

    #[test]
    fn kron_and_submatrix() {
        let a = CMatrix::from_real_rows(&[vec![1.0, 2.0], vec![0.0, 3.0]]);
        let i2 = CMatrix::identity(2);
        let k = a.kron(&i2);
        assert_eq!(k.get(1, 3), c(2.0, 0.0));
        assert_eq!(k.get(2, 0), ZERO);
        assert_eq!(k.to_dense(), a.to_dense().kronecker(&i2.to_dense()));
        let s = k.submatrix(&[0, 1], &[2, 3]);
        assert_eq!(s, i2.scale(c(2.0, 0.0)));
        let e = s.embed(4, 4, &[0, 1], &[2, 3]);
        assert_eq!(e.nnz(), 2);
        assert_eq!(e.get(1, 3), c(2.0, 0.0));
    }

    #[test]
    fn classical_norms() {
        let a = CMatrix::from_real_rows(&[vec![1.0, -2.0], vec![3.0, 0.5]]);
        assert_eq!(a.norm1(), 4.0);
        assert_eq!(a.norm_inf(), 3.5);
    }
}
