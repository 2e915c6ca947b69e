use nalgebra::{DMatrix, DVector};

use super::dense::{check_residual, solve_dense_with, SOLVE_RESIDUAL_TOL};
use super::{c64, ComplexMatrix, ComplexVector, ONE, ZERO};
use crate::error::{Error, Result};

/// Row-compressed complex matrix. Each row holds `(column, value)` pairs
/// sorted by column with no duplicates and no stored zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_entries: Vec<Vec<(usize, c64)>>,
}

/// Accumulates triplets; duplicates are summed and zeros dropped on `build`.
#[derive(Debug, Clone)]
pub struct SparseBuilder {
    rows: usize,
    cols: usize,
    row_entries: Vec<Vec<(usize, c64)>>,
}

impl SparseBuilder {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            row_entries: vec![Vec::new(); rows],
        }
    }

    pub fn push(&mut self, row: usize, col: usize, value: c64) -> Result<()> {
        if row >= self.rows || col >= self.cols {
            return Err(Error::Structure {
                row,
                col,
                reason: format!("index outside {}x{} matrix", self.rows, self.cols),
            });
        }
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::NonFinite { row, col });
        }
        self.row_entries[row].push((col, value));
        Ok(())
    }

    /// Adds a dense block with its top-left corner at `(row0, col0)`.
    pub fn push_block(&mut self, row0: usize, col0: usize, block: &DMatrix<c64>) -> Result<()> {
        for i in 0..block.nrows() {
            for j in 0..block.ncols() {
                let v = block[(i, j)];
                if v != ZERO {
                    self.push(row0 + i, col0 + j, v)?;
                }
            }
        }
        Ok(())
    }

    /// Adds `value · I_n` with its top-left corner at `(row0, col0)`.
    pub fn push_scaled_identity(&mut self, row0: usize, col0: usize, n: usize, value: c64) -> Result<()> {
        for i in 0..n {
            self.push(row0 + i, col0 + i, value)?;
        }
        Ok(())
    }

    pub fn build(self) -> SparseMatrix {
        let row_entries = self
            .row_entries
            .into_iter()
            .map(|mut row| {
                row.sort_by_key(|&(c, _)| c);
                let mut merged: Vec<(usize, c64)> = Vec::with_capacity(row.len());
                for (c, v) in row {
                    match merged.last_mut() {
                        Some((lc, lv)) if *lc == c => *lv += v,
                        _ => merged.push((c, v)),
                    }
                }
                merged.retain(|&(_, v)| v != ZERO);
                merged
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            row_entries,
        }
    }
}

impl SparseMatrix {
    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            row_entries: (0..n).map(|i| vec![(i, ONE)]).collect(),
        }
    }

    pub fn from_dense(m: &ComplexMatrix) -> Self {
        let mut b = SparseBuilder::new(m.rows(), m.cols());
        b.push_block(0, 0, m.as_dmatrix())
            .expect("dense entries are finite and in range");
        b.build()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.row_entries.iter().map(Vec::len).sum()
    }

    pub fn row(&self, i: usize) -> &[(usize, c64)] {
        &self.row_entries[i]
    }

    pub fn get(&self, row: usize, col: usize) -> c64 {
        let r = &self.row_entries[row];
        match r.binary_search_by_key(&col, |&(c, _)| c) {
            Ok(pos) => r[pos].1,
            Err(_) => ZERO,
        }
    }

    /// Largest number of stored entries in any row.
    pub fn max_row_nnz(&self) -> usize {
        self.row_entries.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn mul_vec(&self, x: &DVector<c64>) -> DVector<c64> {
        assert_eq!(x.len(), self.cols, "sparse mat-vec dimension mismatch");
        DVector::from_iterator(
            self.rows,
            self.row_entries
                .iter()
                .map(|row| row.iter().map(|&(c, v)| v * x[c]).sum::<c64>()),
        )
    }

    /// `Sᴴ x`.
    pub fn adjoint_mul_vec(&self, x: &DVector<c64>) -> DVector<c64> {
        assert_eq!(x.len(), self.rows, "sparse adjoint mat-vec dimension mismatch");
        let mut out = DVector::zeros(self.cols);
        for (i, row) in self.row_entries.iter().enumerate() {
            for &(c, v) in row {
                out[c] += v.conj() * x[i];
            }
        }
        out
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (i, row) in self.row_entries.iter().enumerate() {
            for &(c, v) in row {
                m[(i, c)] = v;
            }
        }
        ComplexMatrix::wrap(m)
    }

    /// Cheap lower bound on `‖S‖₂`: the largest row or column 2-norm.
    pub fn norm_lower_bound(&self) -> f64 {
        let mut col_sq = vec![0.0; self.cols];
        let mut row_max: f64 = 0.0;
        for row in &self.row_entries {
            let mut sq = 0.0;
            for &(c, v) in row {
                sq += v.norm_sqr();
                col_sq[c] += v.norm_sqr();
            }
            row_max = row_max.max(sq);
        }
        row_max.max(col_sq.into_iter().fold(0.0, f64::max)).sqrt()
    }

    /// Power iteration on `SᴴS`. Converges from below to `‖S‖₂`; used when
    /// the matrix is too large for a dense SVD.
    pub fn norm_estimate(&self, iterations: usize) -> f64 {
        if self.nnz() == 0 {
            return 0.0;
        }
        // Deterministic start with no special alignment to structured vectors.
        let mut x = DVector::from_iterator(
            self.cols,
            (0..self.cols).map(|i| c64::new(1.0 + ((i * 7919) % 97) as f64 / 97.0, 0.0)),
        );
        let mut estimate = 0.0;
        for _ in 0..iterations {
            let nx = x.norm();
            if nx == 0.0 {
                break;
            }
            x /= c64::new(nx, 0.0);
            let y = self.mul_vec(&x);
            estimate = y.norm();
            x = self.adjoint_mul_vec(&y);
        }
        estimate.max(self.norm_lower_bound())
    }
}

/// Sparse solve strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SparseMethod {
    /// One forward sweep over `block`-sized block rows. The matrix must be
    /// block lower triangular with identity diagonal blocks.
    BlockForward { block: usize },
    /// Densify and use pivoted LU.
    Generic,
}

pub fn solve_sparse(s: &SparseMatrix, rhs: &ComplexVector, method: SparseMethod) -> Result<ComplexVector> {
    solve_sparse_with(s, rhs, method, SOLVE_RESIDUAL_TOL)
}

pub fn solve_sparse_with(
    s: &SparseMatrix,
    rhs: &ComplexVector,
    method: SparseMethod,
    tol: f64,
) -> Result<ComplexVector> {
    if s.rows != s.cols || s.rows != rhs.len() {
        return Err(Error::Dimension(format!(
            "cannot solve {}x{} sparse system with rhs of length {}",
            s.rows,
            s.cols,
            rhs.len()
        )));
    }
    match method {
        SparseMethod::Generic => solve_dense_with(&s.to_dense(), rhs, tol),
        SparseMethod::BlockForward { block } => {
            validate_block_lower_unit(s, block)?;
            let x = forward_sweep(s, rhs.as_dvector());
            let x = ComplexVector::try_from_dvector(x)?;
            check_residual(&s.mul_vec(x.as_dvector()), rhs, &x, s.norm_lower_bound(), tol)?;
            Ok(x)
        }
    }
}

fn validate_block_lower_unit(s: &SparseMatrix, block: usize) -> Result<()> {
    if block == 0 || !s.rows.is_multiple_of(block) {
        return Err(Error::Dimension(format!(
            "block size {block} does not divide dimension {}",
            s.rows
        )));
    }
    for (i, row) in s.row_entries.iter().enumerate() {
        let block_row = i / block;
        let mut saw_diag = false;
        for &(c, v) in row {
            let block_col = c / block;
            if block_col > block_row {
                return Err(Error::Structure {
                    row: i,
                    col: c,
                    reason: "entry above the block diagonal".into(),
                });
            }
            if block_col == block_row {
                if c != i {
                    return Err(Error::Structure {
                        row: i,
                        col: c,
                        reason: "off-diagonal entry inside a diagonal block".into(),
                    });
                }
                if v != ONE {
                    return Err(Error::Structure {
                        row: i,
                        col: c,
                        reason: format!("diagonal entry {v} is not 1"),
                    });
                }
                saw_diag = true;
            }
        }
        if !saw_diag {
            return Err(Error::Structure {
                row: i,
                col: i,
                reason: "missing unit diagonal".into(),
            });
        }
    }
    Ok(())
}

/// Unit lower triangular substitution; entries in diagonal blocks other than
/// the unit diagonal were rejected by validation.
fn forward_sweep(s: &SparseMatrix, rhs: &DVector<c64>) -> DVector<c64> {
    let mut x = rhs.clone();
    for (i, row) in s.row_entries.iter().enumerate() {
        let mut acc = x[i];
        for &(c, v) in row {
            if c < i {
                acc -= v * x[c];
            }
        }
        x[i] = acc;
    }
    x
}
