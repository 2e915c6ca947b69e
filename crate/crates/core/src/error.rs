use thiserror::Error;

/// Errors raised by the emulation laboratory.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is numerically singular (sigma_min = {sigma_min:e}, sigma_max = {sigma_max:e})")]
    Singular { sigma_min: f64, sigma_max: f64 },

    #[error("solve residual {residual:e} exceeds bound {bound:e}")]
    Residual { residual: f64, bound: f64 },

    #[error("structure violation at ({row}, {col}): {reason}")]
    Structure {
        row: usize,
        col: usize,
        reason: String,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
