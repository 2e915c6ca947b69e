//! Seeded matrix families used to probe the bounds, including defective and
//! strongly non-normal cases.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix};

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixFamily {
    /// `A = V D V⁻¹` with `V = U Σ W†`, `Σ` spread geometrically so that
    /// `‖V‖‖V⁻¹‖` is the target before column normalisation.
    RandomDiagonalizable { n: usize, target_kappa_v: f64, seed: u64 },
    /// Single Jordan block.
    JordanBlock { n: usize, eigenvalue: f64 },
    /// `[[-1, K], [0, -1-split]]`; defective when `split = 0`.
    NonNormal2x2 { k: f64, split: f64 },
    /// `s` Gaussian entries per row at random columns.
    RandomSparse { n: usize, s: usize, seed: u64 },
    Diagonal { spectrum: Vec<f64> },
}

fn unitary(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<c64> {
    let g = DMatrix::<c64>::from_fn(n, n, |_, _| {
        c64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    // Fix the phase of each column so the distribution is Haar.
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

impl MatrixFamily {
    pub fn name(&self) -> &'static str {
        match self {
            MatrixFamily::RandomDiagonalizable { .. } => "random_diagonalizable",
            MatrixFamily::JordanBlock { .. } => "jordan_block",
            MatrixFamily::NonNormal2x2 { .. } => "non_normal_2x2",
            MatrixFamily::RandomSparse { .. } => "random_sparse",
            MatrixFamily::Diagonal { .. } => "diagonal",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            MatrixFamily::RandomDiagonalizable { n, .. }
            | MatrixFamily::JordanBlock { n, .. }
            | MatrixFamily::RandomSparse { n, .. } => *n,
            MatrixFamily::NonNormal2x2 { .. } => 2,
            MatrixFamily::Diagonal { spectrum } => spectrum.len(),
        }
    }

    pub fn generate(&self) -> Result<ComplexMatrix> {
        if self.dim() == 0 {
            return Err(Error::Dimension("matrix families need n >= 1".into()));
        }
        match self {
            MatrixFamily::RandomDiagonalizable { n, target_kappa_v, seed } => {
                if !(*target_kappa_v >= 1.0) {
                    return Err(Error::Domain(format!(
                        "target kappa_V must be >= 1, got {target_kappa_v}"
                    )));
                }
                let n = *n;
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let u = unitary(n, &mut rng);
                let w = unitary(n, &mut rng);
                let sigma = DMatrix::<c64>::from_fn(n, n, |i, j| {
                    if i != j {
                        c64::new(0.0, 0.0)
                    } else if n == 1 {
                        c64::new(1.0, 0.0)
                    } else {
                        let frac = i as f64 / (n - 1) as f64;
                        c64::new(target_kappa_v.powf(-frac), 0.0)
                    }
                });
                let v = &u * sigma * w.adjoint();
                let eig: Vec<c64> = (0..n)
                    .map(|_| {
                        let re: f64 = rand::Rng::gen_range(&mut rng, -1.0..0.0);
                        let im: f64 = rand::Rng::gen_range(&mut rng, -1.0..1.0);
                        c64::new(re, im)
                    })
                    .collect();
                let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(eig));
                let v_inv = v
                    .clone()
                    .try_inverse()
                    .ok_or_else(|| Error::Domain("eigenvector matrix not invertible".into()))?;
                ComplexMatrix::try_from_dmatrix(&v * d * v_inv)
            }
            MatrixFamily::JordanBlock { n, eigenvalue } => {
                let n = *n;
                Ok(ComplexMatrix::try_from_dmatrix(DMatrix::from_fn(n, n, |i, j| {
                    if i == j {
                        c64::new(*eigenvalue, 0.0)
                    } else if j == i + 1 {
                        c64::new(1.0, 0.0)
                    } else {
                        c64::new(0.0, 0.0)
                    }
                }))?)
            }
            MatrixFamily::NonNormal2x2 { k, split } => {
                ComplexMatrix::from_real(2, 2, &[-1.0, *k, 0.0, -1.0 - split])
            }
            MatrixFamily::RandomSparse { n, s, seed } => {
                let (n, s) = (*n, *s);
                if s == 0 || s > n {
                    return Err(Error::Domain(format!("row sparsity {s} outside 1..={n}")));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut m = DMatrix::<c64>::zeros(n, n);
                for i in 0..n {
                    for j in sample(&mut rng, n, s) {
                        let re: f64 = StandardNormal.sample(&mut rng);
                        m[(i, j)] = c64::new(re / (s as f64).sqrt(), 0.0);
                    }
                }
                ComplexMatrix::try_from_dmatrix(m)
            }
            MatrixFamily::Diagonal { spectrum } => {
                let d: Vec<c64> = spectrum.iter().map(|&x| c64::new(x, 0.0)).collect();
                ComplexMatrix::from_diagonal(&d)
            }
        }
    }
}

impl fmt::Display for MatrixFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixFamily::RandomDiagonalizable { n, target_kappa_v, seed } => {
                write!(f, "random_diagonalizable:{n}:{target_kappa_v}:{seed}")
            }
            MatrixFamily::JordanBlock { n, eigenvalue } => write!(f, "jordan_block:{n}:{eigenvalue}"),
            MatrixFamily::NonNormal2x2 { k, split } => {
                if *split == 0.0 {
                    write!(f, "non_normal_2x2:{k}")
                } else {
                    write!(f, "non_normal_2x2:{k}:{split}")
                }
            }
            MatrixFamily::RandomSparse { n, s, seed } => write!(f, "random_sparse:{n}:{s}:{seed}"),
            MatrixFamily::Diagonal { spectrum } => {
                let parts: Vec<String> = spectrum.iter().map(|x| x.to_string()).collect();
                write!(f, "diagonal:{}", parts.join(","))
            }
        }
    }
}

fn field<T: FromStr>(parts: &[&str], i: usize, what: &str, spec: &str) -> Result<T> {
    parts
        .get(i)
        .ok_or_else(|| Error::Parse(format!("`{spec}`: missing {what}")))?
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("`{spec}`: cannot parse {what}")))
}

/// `name:arg:arg...`, e.g. `jordan_block:4:-1`, `non_normal_2x2:5:1e-8`,
/// `random_diagonalizable:4:100:7`, `random_sparse:8:2:3`, `diagonal:-1,-2`.
impl FromStr for MatrixFamily {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        let expect_len = |lo: usize, hi: usize| {
            if parts.len() < lo || parts.len() > hi {
                Err(Error::Parse(format!("`{spec}`: wrong number of fields")))
            } else {
                Ok(())
            }
        };
        match parts[0].trim() {
            "random_diagonalizable" => {
                expect_len(4, 4)?;
                Ok(MatrixFamily::RandomDiagonalizable {
                    n: field(&parts, 1, "n", spec)?,
                    target_kappa_v: field(&parts, 2, "target kappa_V", spec)?,
                    seed: field(&parts, 3, "seed", spec)?,
                })
            }
            "jordan_block" => {
                expect_len(3, 3)?;
                Ok(MatrixFamily::JordanBlock {
                    n: field(&parts, 1, "n", spec)?,
                    eigenvalue: field(&parts, 2, "eigenvalue", spec)?,
                })
            }
            "non_normal_2x2" => {
                expect_len(2, 3)?;
                let split = if parts.len() == 3 { field(&parts, 2, "split", spec)? } else { 0.0 };
                Ok(MatrixFamily::NonNormal2x2 { k: field(&parts, 1, "K", spec)?, split })
            }
            "random_sparse" => {
                expect_len(4, 4)?;
                Ok(MatrixFamily::RandomSparse {
                    n: field(&parts, 1, "n", spec)?,
                    s: field(&parts, 2, "s", spec)?,
                    seed: field(&parts, 3, "seed", spec)?,
                })
            }
            "diagonal" => {
                expect_len(2, 2)?;
                let spectrum = parts[1]
                    .split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::Parse(format!("`{spec}`: bad eigenvalue `{x}`")))
                    })
                    .collect::<Result<Vec<f64>>>()?;
                Ok(MatrixFamily::Diagonal { spectrum })
            }
            other => Err(Error::Parse(format!("unknown matrix family `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jordan_block_is_exact() {
        let a = MatrixFamily::JordanBlock { n: 3, eigenvalue: -1.0 }.generate().unwrap();
        let expected =
            ComplexMatrix::from_real(3, 3, &[-1.0, 1.0, 0.0, 0.0, -1.0, 1.0, 0.0, 0.0, -1.0]).unwrap();
        assert_eq!(a, expected);
    }

    #[test]
    fn sparse_family_respects_row_count() {
        let a = MatrixFamily::RandomSparse { n: 9, s: 3, seed: 4 }.generate().unwrap();
        assert!(a.row_sparsity() <= 3);
        let b = MatrixFamily::RandomSparse { n: 9, s: 3, seed: 4 }.generate().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn diagonalizable_family_has_requested_spectrum_region() {
        let a = MatrixFamily::RandomDiagonalizable { n: 4, target_kappa_v: 50.0, seed: 1 }
            .generate()
            .unwrap();
        let trace: c64 = (0..4).map(|i| a[(i, i)]).sum();
        assert!(trace.re < 0.0 && trace.re > -4.0);
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in [
            "random_diagonalizable:4:100:7",
            "jordan_block:4:-1",
            "non_normal_2x2:5",
            "non_normal_2x2:5:0.00000001",
            "random_sparse:8:2:3",
            "diagonal:-1,-2.5,0",
        ] {
            let fam: MatrixFamily = s.parse().unwrap();
            assert_eq!(fam.to_string().parse::<MatrixFamily>().unwrap(), fam);
        }
        assert!("jordan_block:4".parse::<MatrixFamily>().is_err());
        assert!("banded:3".parse::<MatrixFamily>().is_err());
    }
}
