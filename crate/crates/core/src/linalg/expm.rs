//! Matrix exponential by scaling and squaring with diagonal Padé approximants
//! (degree 3, 5, 7, 9 or 13 chosen from the 1-norm), plus the integral
//! `∫₀ᵗ e^{As} ds` through an augmented exponential.

use nalgebra::DMatrix;

use super::{c64, ComplexMatrix};
use crate::error::{Error, Result};

const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.53939833006323e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA_13: f64 = 5.371920351148152e0;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn norm1(a: &DMatrix<c64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn re(x: f64) -> c64 {
    c64::new(x, 0.0)
}

/// Degree 3..9 approximant from explicit even powers.
fn pade_low(a: &DMatrix<c64>, b: &[f64]) -> DMatrix<c64> {
    let n = a.nrows();
    let ident = DMatrix::<c64>::identity(n, n);
    let a2 = a * a;
    let mut power = ident.clone();
    let mut u_inner = &ident * re(b[1]);
    let mut v = &ident * re(b[0]);
    let mut j = 2;
    while j < b.len() {
        power = &power * &a2;
        v += &power * re(b[j]);
        if j + 1 < b.len() {
            u_inner += &power * re(b[j + 1]);
        }
        j += 2;
    }
    let u = a * u_inner;
    solve_pade(&u, &v)
}

fn pade13(a: &DMatrix<c64>) -> DMatrix<c64> {
    let n = a.nrows();
    let b = B13;
    let ident = DMatrix::<c64>::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_hi = &a6 * re(b[13]) + &a4 * re(b[11]) + &a2 * re(b[9]);
    let u_inner = &a6 * u_hi
        + &a6 * re(b[7])
        + &a4 * re(b[5])
        + &a2 * re(b[3])
        + &ident * re(b[1]);
    let u = a * u_inner;
    let v_hi = &a6 * re(b[12]) + &a4 * re(b[10]) + &a2 * re(b[8]);
    let v = &a6 * v_hi + &a6 * re(b[6]) + &a4 * re(b[4]) + &a2 * re(b[2]) + &ident * re(b[0]);
    solve_pade(&u, &v)
}

fn solve_pade(u: &DMatrix<c64>, v: &DMatrix<c64>) -> DMatrix<c64> {
    let p = v + u;
    let q = v - u;
    // q is an approximation of e^{-A/2}·const with ‖A‖₁ ≤ θ₁₃, never singular.
    q.lu()
        .solve(&p)
        .expect("Padé denominator is nonsingular for scaled arguments")
}

pub fn expm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "exponential of a non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    Ok(ComplexMatrix::wrap(expm_raw(m.as_dmatrix())))
}

pub(crate) fn expm_raw(a: &DMatrix<c64>) -> DMatrix<c64> {
    let nrm = norm1(a);
    for (degree, theta) in THETA {
        if nrm <= theta {
            return match degree {
                3 => pade_low(a, &B3),
                5 => pade_low(a, &B5),
                7 => pade_low(a, &B7),
                _ => pade_low(a, &B9),
            };
        }
    }
    let s = (nrm / THETA_13).log2().ceil().max(0.0) as i32;
    let scaled = a * re(0.5f64.powi(s));
    let mut x = pade13(&scaled);
    for _ in 0..s {
        x = &x * &x;
    }
    x
}

/// `∫₀ᵗ e^{As} ds`, read off the top-right block of `exp([[A, I], [0, 0]]·t)`.
/// Valid for singular `A`.
pub fn integral_expm(a: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "integral exponential of a non-square {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("integration length must be >= 0, got {t}")));
    }
    let n = a.rows();
    let mut aug = DMatrix::<c64>::zeros(2 * n, 2 * n);
    aug.view_mut((0, 0), (n, n)).copy_from(&(a.as_dmatrix() * re(t)));
    aug.view_mut((0, n), (n, n))
        .copy_from(&(DMatrix::<c64>::identity(n, n) * re(t)));
    let e = expm_raw(&aug);
    Ok(ComplexMatrix::wrap(e.view((0, n), (n, n)).into_owned()))
}
