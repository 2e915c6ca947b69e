// Negated float comparisons are used on purpose so NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod autonomization;
pub mod bcow;
pub mod bounds;
pub mod error;
pub mod linalg;
pub mod taylor;

pub use error::{Error, Result};
