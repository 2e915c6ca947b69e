//! Truncated Taylor propagators and the step-by-step recursion the block
//! linear system has to reproduce.
//!
//! All propagators take the already scaled matrix `Ah`. Powers are built by
//! repeated multiplication with `Ah`, so intermediates stay bounded when
//! `‖Ah‖ ≤ 1`.

use crate::bcow::BcowParams;
use crate::error::{Error, Result};
use crate::linalg::{c64, expm, integral_expm, ComplexMatrix, ComplexVector};

/// Constant-coefficient problem `x' = A x + b`, `x(0) = x_in`, on `[0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeProblem {
    a: ComplexMatrix,
    b: ComplexVector,
    x_in: ComplexVector,
    t_final: f64,
}

impl OdeProblem {
    pub fn new(a: ComplexMatrix, b: ComplexVector, x_in: ComplexVector, t_final: f64) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension(format!(
                "coefficient matrix must be square, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        if b.len() != a.rows() || x_in.len() != a.rows() {
            return Err(Error::Dimension(format!(
                "A is {n}x{n} but b has length {} and x_in has length {}",
                b.len(),
                x_in.len(),
                n = a.rows()
            )));
        }
        if !(t_final > 0.0) || !t_final.is_finite() {
            return Err(Error::Domain(format!("evolution time must be positive, got {t_final}")));
        }
        Ok(Self { a, b, x_in, t_final })
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn b(&self) -> &ComplexVector {
        &self.b
    }

    pub fn x_in(&self) -> &ComplexVector {
        &self.x_in
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }
}

/// States `x_{i,0}` at `t_i = i·h`, `i = 0..=m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub points: Vec<(f64, ComplexVector)>,
}

impl Trajectory {
    pub fn final_state(&self) -> &ComplexVector {
        &self.points.last().expect("trajectory is never empty").1
    }

    pub fn states(&self) -> impl Iterator<Item = &ComplexVector> {
        self.points.iter().map(|(_, x)| x)
    }
}

/// `T_{b,k}(M) = Σ_{j=b}^{k} b!·M^{j−b}/j!`, by Horner accumulation
/// `I + M/(b+1)·(I + M/(b+2)·(… (I + M/k)))`.
pub fn t_bk(m_scaled: &ComplexMatrix, b: usize, k: usize) -> Result<ComplexMatrix> {
    if !m_scaled.is_square() {
        return Err(Error::Dimension("truncated propagator of a non-square matrix".into()));
    }
    if b > k {
        return Err(Error::Domain(format!("T_(b,k) needs b <= k, got b = {b}, k = {k}")));
    }
    let n = m_scaled.rows();
    let ident = ComplexMatrix::identity(n);
    let mut acc = ident.clone();
    for q in (b + 1..=k).rev() {
        acc = m_scaled.mul(&acc).scale_real(1.0 / q as f64).add(&ident);
    }
    Ok(acc)
}

/// `T_k(M) = Σ_{j=0}^{k} M^j/j!`.
pub fn t_k(m_scaled: &ComplexMatrix, k: usize) -> Result<ComplexMatrix> {
    t_bk(m_scaled, 0, k)
}

/// `S_k(Ah) = h·Σ_{j=1}^{k} (Ah)^{j−1}/j!`, which equals `h·T_{1,k}(Ah)`.
pub fn s_k(m_scaled: &ComplexMatrix, h: f64, k: usize) -> Result<ComplexMatrix> {
    if k == 0 {
        return Err(Error::Domain("S_k is defined for k >= 1".into()));
    }
    if !(h > 0.0) {
        return Err(Error::Domain(format!("step must be positive, got {h}")));
    }
    Ok(t_bk(m_scaled, 1, k)?.scale_real(h))
}

/// One truncated step `T_k·x + S_k·b`.
pub fn taylor_step(
    x: &ComplexVector,
    tk: &ComplexMatrix,
    sk: &ComplexMatrix,
    b: &ComplexVector,
) -> Result<ComplexVector> {
    let n = x.len();
    if tk.rows() != n || tk.cols() != n || sk.rows() != n || sk.cols() != n || b.len() != n {
        return Err(Error::Dimension("taylor_step operands disagree in size".into()));
    }
    Ok(tk.mul_vec(x).add(&sk.mul_vec(b)))
}

/// The m-step truncated recursion; the brute-force oracle for the block solve.
pub fn iterate_oracle(p: &OdeProblem, params: &BcowParams) -> Result<Trajectory> {
    params.check_against(p.t_final())?;
    let ah = p.a().scale_real(params.h);
    let tk = t_k(&ah, params.k)?;
    let sk = if params.k >= 1 {
        s_k(&ah, params.h, params.k)?
    } else {
        // T_0 step carries no inhomogeneous term.
        ComplexMatrix::zeros(p.dim(), p.dim())
    };
    let mut points = Vec::with_capacity(params.m + 1);
    let mut x = p.x_in().clone();
    points.push((0.0, x.clone()));
    for i in 1..=params.m {
        x = taylor_step(&x, &tk, &sk, p.b())?;
        let t = if i == params.m { p.t_final() } else { i as f64 * params.h };
        points.push((t, x.clone()));
    }
    Ok(Trajectory { points })
}

/// `x(t) = e^{At} x_in + ∫₀ᵗ e^{As} ds · b`.
pub fn exact_solution(p: &OdeProblem, t: f64) -> Result<ComplexVector> {
    if !(0.0..=p.t_final()).contains(&t) {
        return Err(Error::Domain(format!(
            "t = {t} lies outside the evolution interval [0, {}]",
            p.t_final()
        )));
    }
    let at = p.a().scale(c64::new(t, 0.0));
    let e = expm(&at)?;
    let s = integral_expm(p.a(), t)?;
    Ok(e.mul_vec(p.x_in()).add(&s.mul_vec(p.b())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bcow::BcowParams;

    fn scalar(x: f64) -> ComplexMatrix {
        ComplexMatrix::from_real(1, 1, &[x]).unwrap()
    }

    fn sample_matrix() -> ComplexMatrix {
        ComplexMatrix::new(
            3,
            3,
            vec![
                c64::new(-0.3, 0.1),
                c64::new(0.4, 0.0),
                c64::new(0.0, -0.2),
                c64::new(0.1, 0.1),
                c64::new(-0.5, 0.0),
                c64::new(0.2, 0.0),
                c64::new(0.0, 0.3),
                c64::new(-0.1, 0.0),
                c64::new(0.25, -0.15),
            ],
        )
        .unwrap()
    }

    #[test]
    fn t_k_examples() {
        let m = sample_matrix();
        assert_eq!(t_k(&m, 0).unwrap(), ComplexMatrix::identity(3));
        assert_eq!(t_k(&ComplexMatrix::zeros(2, 2), 7).unwrap(), ComplexMatrix::identity(2));
        let v = t_k(&scalar(1.0), 3).unwrap()[(0, 0)].re;
        assert!((v - 8.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn s_k_examples() {
        let m = sample_matrix();
        let s = s_k(&m, 0.3, 1).unwrap();
        assert_eq!(s, ComplexMatrix::identity(3).scale_real(0.3));
        let v = s_k(&scalar(1.0), 0.5, 2).unwrap()[(0, 0)].re;
        assert!((v - 0.75).abs() < 1e-15);
        let z = s_k(&ComplexMatrix::zeros(2, 2), 0.25, 6).unwrap();
        assert_eq!(z, ComplexMatrix::identity(2).scale_real(0.25));
        assert!(matches!(s_k(&m, 0.3, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn t_bk_examples() {
        let m = sample_matrix();
        assert_eq!(t_bk(&m, 4, 4).unwrap(), ComplexMatrix::identity(3));
        for k in 0..8 {
            assert_eq!(t_bk(&m, 0, k).unwrap(), t_k(&m, k).unwrap());
        }
        let v = t_bk(&scalar(1.0), 1, 3).unwrap()[(0, 0)].re;
        assert!((v - 5.0 / 3.0).abs() < 1e-15);
        assert!(matches!(t_bk(&m, 3, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn t_bk_matches_direct_power_sum() {
        let m = sample_matrix();
        for (b, k) in [(0, 5), (2, 6), (5, 9)] {
            // Σ_{j=b}^{k} b!/j! M^{j−b}
            let mut sum = ComplexMatrix::zeros(3, 3);
            let mut coeff = 1.0;
            let mut power = ComplexMatrix::identity(3);
            for j in b..=k {
                if j > b {
                    coeff /= j as f64;
                    power = power.mul(&m);
                }
                sum = sum.add(&power.scale_real(coeff));
            }
            assert!(t_bk(&m, b, k).unwrap().sub(&sum).frobenius_norm() < 1e-14);
        }
    }

    #[test]
    fn taylor_step_examples() {
        let x = ComplexVector::from_real(&[1.0, -2.0]);
        let b = ComplexVector::from_real(&[0.5, 0.5]);
        let id = ComplexMatrix::identity(2);
        let zero = ComplexMatrix::zeros(2, 2);
        assert_eq!(taylor_step(&x, &id, &zero, &b).unwrap(), x);
        let tk = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let y = taylor_step(&x, &tk, &id, &ComplexVector::zeros(2)).unwrap();
        assert_eq!(y, tk.mul_vec(&x));

        // A = [1], h = 1, k = 3: 8/3 + 5/3.
        let one = scalar(1.0);
        let y = taylor_step(
            &ComplexVector::from_real(&[1.0]),
            &t_k(&one, 3).unwrap(),
            &s_k(&one, 1.0, 3).unwrap(),
            &ComplexVector::from_real(&[1.0]),
        )
        .unwrap();
        assert!((y[0].re - 13.0 / 3.0).abs() < 1e-14);
    }

    fn params(m: usize, k: usize, t: f64) -> BcowParams {
        BcowParams::fixed(m, k, m, t, 0.1).unwrap()
    }

    #[test]
    fn oracle_collapses_for_zero_matrix() {
        let x_in = ComplexVector::from_real(&[1.0, -1.0]);
        let p = OdeProblem::new(ComplexMatrix::zeros(2, 2), ComplexVector::zeros(2), x_in.clone(), 2.0).unwrap();
        let traj = iterate_oracle(&p, &params(4, 5, 2.0)).unwrap();
        assert!(traj.states().all(|x| *x == x_in));

        let b = ComplexVector::from_real(&[0.5, 2.0]);
        let p = OdeProblem::new(ComplexMatrix::zeros(2, 2), b.clone(), x_in.clone(), 2.0).unwrap();
        let traj = iterate_oracle(&p, &params(4, 5, 2.0)).unwrap();
        for (i, (t, x)) in traj.points.iter().enumerate() {
            let expected = x_in.add(&b.scale_real(i as f64 * 0.5));
            assert!(x.sub(&expected).norm() < 1e-14);
            assert!((t - i as f64 * 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn homogeneous_oracle_is_matrix_power() {
        let a = sample_matrix();
        let x_in = ComplexVector::from_real(&[1.0, 0.5, -0.25]);
        let p = OdeProblem::new(a.clone(), ComplexVector::zeros(3), x_in.clone(), 1.5).unwrap();
        let pr = params(3, 6, 1.5);
        let traj = iterate_oracle(&p, &pr).unwrap();
        let tk = t_k(&a.scale_real(pr.h), pr.k).unwrap();
        let direct = tk.pow(pr.m).mul_vec(&x_in);
        assert!(traj.final_state().sub(&direct).norm() <= 1e-14 * direct.norm());
    }

    #[test]
    fn exact_solution_examples() {
        let a = sample_matrix();
        let x_in = ComplexVector::from_real(&[1.0, 2.0, 3.0]);
        let b = ComplexVector::from_real(&[0.1, 0.0, -0.2]);
        let p = OdeProblem::new(a, b.clone(), x_in.clone(), 1.0).unwrap();
        assert!(exact_solution(&p, 0.0).unwrap().sub(&x_in).norm() < 1e-15);
        assert!(matches!(exact_solution(&p, 1.5), Err(Error::Domain(_))));

        let p0 = OdeProblem::new(ComplexMatrix::zeros(3, 3), b.clone(), x_in.clone(), 2.0).unwrap();
        let x = exact_solution(&p0, 0.7).unwrap();
        assert!(x.sub(&x_in.add(&b.scale_real(0.7))).norm() < 1e-14);

        let ps = OdeProblem::new(
            scalar(-1.0),
            ComplexVector::from_real(&[1.0]),
            ComplexVector::from_real(&[0.0]),
            1.0,
        )
        .unwrap();
        let x = exact_solution(&ps, 1.0).unwrap()[0].re;
        assert!((x - (1.0 - (-1.0f64).exp())).abs() < 1e-14);
    }

    #[test]
    fn problem_validation() {
        let a = ComplexMatrix::identity(2);
        let v2 = ComplexVector::zeros(2);
        let v3 = ComplexVector::zeros(3);
        assert!(OdeProblem::new(a.clone(), v3.clone(), v2.clone(), 1.0).is_err());
        assert!(OdeProblem::new(a.clone(), v2.clone(), v2.clone(), 0.0).is_err());
        assert!(OdeProblem::new(ComplexMatrix::zeros(2, 3), v2.clone(), v2, 1.0).is_err());
    }
}
