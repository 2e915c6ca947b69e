use serde::{Deserialize, Serialize};

use super::{c64, ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};

/// On-disk form of a matrix or vector: `rows`, `cols` and row-major
/// `[re, im]` entries. Vectors use `cols = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixFile {
    fn check(&self) -> Result<Vec<c64>> {
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::Parse(format!(
                "{} entries for a {}x{} matrix",
                self.entries.len(),
                self.rows,
                self.cols
            )));
        }
        Ok(self.entries.iter().map(|&[re, im]| c64::new(re, im)).collect())
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let entries = self.check()?;
        ComplexMatrix::new(self.rows, self.cols, entries)
    }

    pub fn to_vector(&self) -> Result<ComplexVector> {
        let entries = self.check()?;
        if self.cols != 1 {
            return Err(Error::Parse(format!(
                "vector must have exactly one column, found {}",
                self.cols
            )));
        }
        ComplexVector::new(entries)
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.row_major().into_iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn from_vector(v: &ComplexVector) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            entries: v.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix file serializes")
    }
}
