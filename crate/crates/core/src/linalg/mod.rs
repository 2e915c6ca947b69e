//! Dense and sparse complex linear algebra used by every other module.
//!
//! All scalars are `Complex<f64>`. Dense storage is a thin validated wrapper
//! over `nalgebra::DMatrix` so the rest of the crate can use nalgebra's
//! arithmetic through `Deref` while construction still enforces finiteness.

mod dense;
mod expm;
mod io;
mod sparse;

use std::fmt;
use std::ops::Deref;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use dense::{
    condition_number, norm_lower_bound, solve_dense, solve_dense_with, spectral_norm,
    Conditioning, SOLVE_RESIDUAL_TOL, SINGULAR_RATIO,
};
pub use expm::{expm, integral_expm};
pub use io::MatrixFile;
pub use sparse::{solve_sparse, solve_sparse_with, SparseBuilder, SparseMatrix, SparseMethod};

#[allow(non_camel_case_types)]
pub type c64 = Complex64;

pub(crate) const ZERO: c64 = c64::new(0.0, 0.0);
pub(crate) const ONE: c64 = c64::new(1.0, 0.0);

/// Dense complex matrix with at least one row and one column and finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<c64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<c64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Self::try_from_dmatrix(DMatrix::from_row_slice(rows, cols, &entries))
    }

    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&x| c64::new(x, 0.0)).collect())
    }

    pub fn try_from_dmatrix(m: DMatrix<c64>) -> Result<Self> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(Error::Dimension(format!(
                "empty matrix ({}x{})",
                m.nrows(),
                m.ncols()
            )));
        }
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let z = m[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self(m))
    }

    /// Wraps a matrix produced by arithmetic on already-validated inputs.
    pub(crate) fn wrap(m: DMatrix<c64>) -> Self {
        debug_assert!(m.nrows() > 0 && m.ncols() > 0);
        Self(m)
    }

    pub fn identity(n: usize) -> Self {
        Self::wrap(DMatrix::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::wrap(DMatrix::zeros(rows, cols))
    }

    pub fn from_diagonal(diag: &[c64]) -> Result<Self> {
        Self::try_from_dmatrix(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<c64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<c64> {
        self.0
    }

    /// Row-major copy of the entries.
    pub fn row_major(&self) -> Vec<c64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn scale(&self, factor: c64) -> Self {
        Self::wrap(&self.0 * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(c64::new(factor, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        Self::wrap(self.0.adjoint())
    }

    pub fn mul(&self, other: &ComplexMatrix) -> Self {
        Self::wrap(&self.0 * &other.0)
    }

    pub fn add(&self, other: &ComplexMatrix) -> Self {
        Self::wrap(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Self {
        Self::wrap(&self.0 - &other.0)
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> ComplexVector {
        ComplexVector::wrap(&self.0 * &v.0)
    }

    /// `self^power` by repeated squaring.
    pub fn pow(&self, power: usize) -> Self {
        assert!(self.is_square(), "matrix power of a non-square matrix");
        let mut result = DMatrix::identity(self.rows(), self.cols());
        let mut base = self.0.clone();
        let mut e = power;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Self::wrap(result)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Number of nonzero entries in the densest row.
    pub fn row_sparsity(&self) -> usize {
        (0..self.rows())
            .map(|i| self.0.row(i).iter().filter(|z| **z != ZERO).count())
            .max()
            .unwrap_or(0)
    }
}

impl Deref for ComplexMatrix {
    type Target = DMatrix<c64>;

    fn deref(&self) -> &DMatrix<c64> {
        &self.0
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix({}x{}) {:?}", self.rows(), self.cols(), self.row_major())
    }
}

/// Complex column vector with finite entries. Length zero is allowed.
#[derive(Clone, PartialEq)]
pub struct ComplexVector(DVector<c64>);

impl ComplexVector {
    pub fn new(entries: Vec<c64>) -> Result<Self> {
        Self::try_from_dvector(DVector::from_vec(entries))
    }

    pub fn from_real(entries: &[f64]) -> Self {
        Self::wrap(DVector::from_iterator(
            entries.len(),
            entries.iter().map(|&x| c64::new(x, 0.0)),
        ))
    }

    pub fn try_from_dvector(v: DVector<c64>) -> Result<Self> {
        if let Some(i) = v.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: i, col: 0 });
        }
        Ok(Self(v))
    }

    pub(crate) fn wrap(v: DVector<c64>) -> Self {
        Self(v)
    }

    pub fn zeros(len: usize) -> Self {
        Self::wrap(DVector::zeros(len))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_dvector(&self) -> &DVector<c64> {
        &self.0
    }

    pub fn into_dvector(self) -> DVector<c64> {
        self.0
    }

    pub fn as_slice(&self) -> &[c64] {
        self.0.as_slice()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.norm_squared()
    }

    pub fn scale(&self, factor: c64) -> Self {
        Self::wrap(&self.0 * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(c64::new(factor, 0.0))
    }

    pub fn add(&self, other: &ComplexVector) -> Self {
        Self::wrap(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &ComplexVector) -> Self {
        Self::wrap(&self.0 - &other.0)
    }

    /// Copy of `len` entries starting at `start`.
    pub fn segment(&self, start: usize, len: usize) -> Self {
        Self::wrap(self.0.rows(start, len).into_owned())
    }

    /// `self / ‖self‖`; `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale_real(1.0 / n))
    }

    /// Stacks vectors end to end.
    pub fn concat(parts: &[&ComplexVector]) -> Self {
        let len = parts.iter().map(|p| p.len()).sum();
        let mut out = DVector::zeros(len);
        let mut offset = 0;
        for p in parts {
            out.rows_mut(offset, p.len()).copy_from(&p.0);
            offset += p.len();
        }
        Self::wrap(out)
    }

    /// Kronecker product `weights ⊗ self`.
    pub fn kron_weights(weights: &[f64], v: &ComplexVector) -> Self {
        let n = v.len();
        let mut out = DVector::zeros(weights.len() * n);
        for (l, &w) in weights.iter().enumerate() {
            for i in 0..n {
                out[l * n + i] = v.0[i] * w;
            }
        }
        Self::wrap(out)
    }
}

impl Deref for ComplexVector {
    type Target = DVector<c64>;

    fn deref(&self) -> &DVector<c64> {
        &self.0
    }
}

impl fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexVector{:?}", self.0.as_slice())
    }
}

/// `‖a − b‖ / ‖b‖`, falling back to the absolute distance when `b` vanishes.
pub fn relative_distance(a: &ComplexVector, b: &ComplexVector) -> f64 {
    let diff = a.sub(b).norm();
    let scale = b.norm();
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_dimension_mismatch_and_empty() {
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![ONE; 3]),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            ComplexMatrix::new(0, 3, vec![]),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn rejects_non_finite_entries() {
        let err = ComplexMatrix::from_real(2, 2, &[1.0, f64::NAN, 0.0, 1.0]).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 0, col: 1 });
        assert!(ComplexVector::new(vec![c64::new(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn row_major_round_trip() {
        let m = ComplexMatrix::from_real(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(m[(0, 2)], c64::new(3.0, 0.0));
        assert_eq!(m[(1, 0)], c64::new(4.0, 0.0));
        let back = ComplexMatrix::new(2, 3, m.row_major()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let m = ComplexMatrix::new(
            2,
            2,
            vec![c64::new(0.5, 0.1), ONE, c64::new(-0.2, 0.0), c64::new(0.3, -0.4)],
        )
        .unwrap();
        let mut direct = ComplexMatrix::identity(2);
        for _ in 0..5 {
            direct = direct.mul(&m);
        }
        assert!(m.pow(5).sub(&direct).frobenius_norm() < 1e-14);
        assert_eq!(m.pow(0), ComplexMatrix::identity(2));
    }
}
