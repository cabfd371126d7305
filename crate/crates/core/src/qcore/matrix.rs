use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::QcoreError;
use crate::parallel::{self, Execution};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Dense square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

/// Eigen-decomposition of a self-adjoint matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// `vectors[k]` is the normalized eigenvector for `values[k]`.
    pub vectors: Vec<Vec<C64>>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self, QcoreError> {
        if dim == 0 {
            return Err(QcoreError::InvalidDimension { dim });
        }
        if data.len() != dim * dim {
            return Err(QcoreError::EntryCount {
                expected: dim * dim,
                found: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QcoreError::NonFinite {
                row: k / dim,
                col: k % dim,
            });
        }
        Ok(Self { dim, data })
    }

    pub(crate) fn from_raw(dim: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self { dim, data }
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self, QcoreError> {
        Self::new(dim, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| ZERO)
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diag(entries: &[C64]) -> Self {
        Self::from_fn(entries.len(), |i, j| if i == j { entries[i] } else { ZERO })
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        Self::from_fn(entries.len(), |i, j| {
            if i == j {
                C64::new(entries[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// `|v⟩⟨v|` (no normalization).
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    /// Single computational-basis projector `|k⟩⟨k|`.
    pub fn basis_projector(dim: usize, k: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == k && j == k { ONE } else { ZERO })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<(), QcoreError> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(QcoreError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            })
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_raw(self.dim, self.data.iter().map(|z| z * s).collect())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, QcoreError> {
        self.check_same_dim(other)?;
        Ok(self.mul_with(other, Execution::default()))
    }

    /// Matrix product, row blocks distributed according to `exec`.
    pub fn mul_with(&self, other: &Self, exec: Execution) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in product");
        let n = self.dim;
        // small products are not worth the pool round trip
        let exec = if n < 64 { Execution::Sequential } else { exec };
        let rows = parallel::map_range(n, exec, |i| {
            let mut out = vec![ZERO; n];
            for (k, a) in self.row(i).iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for (o, b) in out.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
            out
        });
        Self::from_raw(n, rows.concat())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, QcoreError> {
        self.check_same_dim(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, QcoreError> {
        self.check_same_dim(other)?;
        Ok(self - other)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        Self::from_fn(a * b, |i, j| self[(i / b, j / b)] * other[(i % b, j % b)])
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self, QcoreError> {
        Ok(&self.try_mul(other)? - &other.try_mul(self)?)
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-entry distance; `f64::INFINITY` when dimensions differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// `max|M − M†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Eigen-decomposition of the self-adjoint part of `self`.
    pub fn hermitian_eigen(&self) -> HermitianEigen {
        let n = self.dim;
        let h = self.hermitian_part();
        let m = DMatrix::<C64>::from_fn(n, n, |i, j| h[(i, j)]);
        let eig = SymmetricEigen::new(m);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = order
            .iter()
            .map(|&k| {
                let v: Vec<C64> = eig.eigenvectors.column(k).iter().copied().collect();
                normalize(&v)
            })
            .collect();
        HermitianEigen { values, vectors }
    }

    /// Flattened row-major entries rounded to `digits` decimals, as integers.
    /// Used as a canonical sort and hash key.
    pub fn rounded_key(&self, digits: i32) -> Vec<(i64, i64)> {
        let scale = 10f64.powi(digits);
        self.data
            .iter()
            .map(|z| ((z.re * scale).round() as i64, (z.im * scale).round() as i64))
            .collect()
    }
}

pub(crate) fn normalize(v: &[C64]) -> Vec<C64> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return v.to_vec();
    }
    v.iter().map(|z| z / norm).collect()
}

pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.mul_with(rhs, Execution::default())
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        ComplexMatrix::from_raw(
            self.dim,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        )
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        ComplexMatrix::from_raw(
            self.dim,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        )
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// JSON matrix literal `{"dim": n, "re": [...], "im": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixLiteral {
    pub dim: usize,
    pub re: Vec<f64>,
    #[serde(default)]
    pub im: Vec<f64>,
}

impl ComplexMatrix {
    pub fn to_literal(&self) -> MatrixLiteral {
        MatrixLiteral {
            dim: self.dim,
            re: self.data.iter().map(|z| z.re).collect(),
            im: self.data.iter().map(|z| z.im).collect(),
        }
    }

    /// Builds a matrix from a literal. An empty `im` array means a real matrix.
    pub fn from_literal(lit: &MatrixLiteral) -> Result<Self, QcoreError> {
        let n2 = lit.dim * lit.dim;
        if lit.re.len() != n2 {
            return Err(QcoreError::EntryCount {
                expected: n2,
                found: lit.re.len(),
            });
        }
        if !lit.im.is_empty() && lit.im.len() != n2 {
            return Err(QcoreError::EntryCount {
                expected: n2,
                found: lit.im.len(),
            });
        }
        let data = (0..n2)
            .map(|k| C64::new(lit.re[k], lit.im.get(k).copied().unwrap_or(0.0)))
            .collect();
        Self::new(lit.dim, data)
    }

    pub fn from_json(text: &str) -> Result<Self, QcoreError> {
        let lit: MatrixLiteral =
            serde_json::from_str(text).map_err(|e| QcoreError::Literal(e.to_string()))?;
        Self::from_literal(&lit)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_literal()).expect("literal serialization is infallible")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn trace_examples() {
        assert_eq!(ComplexMatrix::identity(2).trace(), c(2.0, 0.0));
        assert_eq!(ComplexMatrix::zeros(3).trace(), ZERO);
        assert!((ComplexMatrix::diag_real(&[0.3, 0.7]).trace() - ONE).norm() < 1e-15);
    }

    #[test]
    fn tensor_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.tensor(&i2), ComplexMatrix::identity(4));
        let p0 = ComplexMatrix::basis_projector(2, 0);
        let p1 = ComplexMatrix::basis_projector(2, 1);
        assert_eq!(p0.tensor(&p1), ComplexMatrix::diag_real(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            ComplexMatrix::new(0, vec![]),
            Err(QcoreError::InvalidDimension { .. })
        ));
        assert!(matches!(
            ComplexMatrix::new(2, vec![ONE; 3]),
            Err(QcoreError::EntryCount { expected: 4, found: 3 })
        ));
        assert!(matches!(
            ComplexMatrix::new(2, vec![ONE, ONE, c(f64::NAN, 0.0), ONE]),
            Err(QcoreError::NonFinite { row: 1, col: 0 })
        ));
    }

    #[test]
    fn eigen_of_pauli_x() {
        let x = ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let e = x.hermitian_eigen();
        assert!((e.values[0] + 1.0).abs() < 1e-12 && (e.values[1] - 1.0).abs() < 1e-12);
        let v = &e.vectors[1];
        assert!((v[0].norm() - v[1].norm()).abs() < 1e-12);
    }

    #[test]
    fn literal_round_trip() {
        let m = ComplexMatrix::from_fn(2, |i, j| c(i as f64, j as f64 - 0.5));
        let back = ComplexMatrix::from_json(&m.to_json()).unwrap();
        assert_eq!(m, back);
        let real = ComplexMatrix::from_json(r#"{"dim":1,"re":[2.0]}"#).unwrap();
        assert_eq!(real.trace(), c(2.0, 0.0));
        assert!(ComplexMatrix::from_json(r#"{"dim":2,"re":[1.0]}"#).is_err());
    }

    #[test]
    fn parallel_product_matches_sequential() {
        let a = ComplexMatrix::from_fn(70, |i, j| c((i * 3 + j) as f64 % 7.0, (i + 2 * j) as f64 % 5.0));
        let b = a.adjoint();
        let seq = a.mul_with(&b, Execution::Sequential);
        let par = a.mul_with(&b, Execution::Parallel);
        assert_eq!(seq, par);
    }
}
