use nalgebra::DVector;

use super::{c64, ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};

/// Relative residual accepted by every solve path.
pub const SOLVE_RESIDUAL_TOL: f64 = 1e-10;

/// `σ_min < SINGULAR_RATIO · σ_max` is treated as singular.
pub const SINGULAR_RATIO: f64 = 1e-14;

/// Largest singular value.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).0
}

/// `(σ_max, σ_min)` from a full SVD.
fn singular_values(m: &ComplexMatrix) -> (f64, f64) {
    let sv = m.as_dmatrix().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    (max, min)
}

/// 2-norm condition number, or the singular flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Conditioning {
    Finite(f64),
    Singular { sigma_min: f64, sigma_max: f64 },
}

impl Conditioning {
    pub fn value(&self) -> Option<f64> {
        match self {
            Conditioning::Finite(k) => Some(*k),
            Conditioning::Singular { .. } => None,
        }
    }
}

pub fn condition_number(m: &ComplexMatrix) -> Result<Conditioning> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "condition number of a non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let (sigma_max, sigma_min) = singular_values(m);
    if sigma_max == 0.0 || sigma_min < SINGULAR_RATIO * sigma_max {
        Ok(Conditioning::Singular {
            sigma_min,
            sigma_max,
        })
    } else {
        Ok(Conditioning::Finite(sigma_max / sigma_min))
    }
}

/// Cheap lower bound on `‖M‖₂`: the largest row or column 2-norm.
pub fn norm_lower_bound(m: &ComplexMatrix) -> f64 {
    let col = m.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
    let row = m.row_iter().map(|r| r.norm()).fold(0.0, f64::max);
    col.max(row)
}

pub fn solve_dense(m: &ComplexMatrix, rhs: &ComplexVector) -> Result<ComplexVector> {
    solve_dense_with(m, rhs, SOLVE_RESIDUAL_TOL)
}

/// LU with partial pivoting followed by the residual contract
/// `‖Mx − rhs‖ ≤ tol·(‖M‖‖x‖ + ‖rhs‖)`.
pub fn solve_dense_with(m: &ComplexMatrix, rhs: &ComplexVector, tol: f64) -> Result<ComplexVector> {
    if !m.is_square() || m.rows() != rhs.len() {
        return Err(Error::Dimension(format!(
            "cannot solve {}x{} system with rhs of length {}",
            m.rows(),
            m.cols(),
            rhs.len()
        )));
    }
    let lu = m.as_dmatrix().clone().lu();
    let u = lu.u();
    let pivots = u.diagonal().map(|z| z.norm());
    let pmax = pivots.max();
    let pmin = pivots.min();
    let suspicious = pmax == 0.0 || pmin < SINGULAR_RATIO * pmax;

    let x = if suspicious { None } else { lu.solve(rhs.as_dvector()) };
    let x = match x {
        Some(x) if x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) => x,
        _ => return Err(singular_error(m)),
    };
    let x = ComplexVector::wrap(x);
    check_residual(&(m.as_dmatrix() * x.as_dvector()), rhs, &x, norm_lower_bound(m), tol)
        .map_err(|e| match condition_number(m) {
            Ok(Conditioning::Singular { .. }) => singular_error(m),
            _ => e,
        })?;
    Ok(x)
}

fn singular_error(m: &ComplexMatrix) -> Error {
    let (sigma_max, sigma_min) = singular_values(m);
    Error::Singular {
        sigma_min,
        sigma_max,
    }
}

pub(crate) fn check_residual(
    product: &DVector<c64>,
    rhs: &ComplexVector,
    x: &ComplexVector,
    norm_m: f64,
    tol: f64,
) -> Result<()> {
    let residual = (product - rhs.as_dvector()).norm();
    let bound = tol * (norm_m * x.norm() + rhs.norm());
    if residual <= bound || residual == 0.0 {
        Ok(())
    } else {
        Err(Error::Residual { residual, bound })
    }
}
