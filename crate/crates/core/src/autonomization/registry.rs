use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::taylor::OdeProblem;

pub type MatrixSampler = Arc<dyn Fn(f64) -> Option<ComplexMatrix> + Send + Sync>;
pub type VectorSampler = Arc<dyn Fn(f64) -> Option<ComplexVector> + Send + Sync>;

/// `x' = A(t)x + b(t)`, `x(0) = x_in`, on `[0, T]`. Samplers return `None`
/// outside their domain.
#[derive(Clone)]
pub struct TimeOdeProblem {
    n: usize,
    a_of: MatrixSampler,
    b_of: VectorSampler,
    x_in: ComplexVector,
    t_final: f64,
    name: String,
}

impl std::fmt::Debug for TimeOdeProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TimeOdeProblem")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("t_final", &self.t_final)
            .finish()
    }
}

impl TimeOdeProblem {
    pub fn new(
        name: &str,
        a_of: MatrixSampler,
        b_of: VectorSampler,
        x_in: ComplexVector,
        t_final: f64,
    ) -> Result<Self> {
        if !(t_final > 0.0) || !t_final.is_finite() {
            return Err(Error::Domain(format!("evolution time must be positive, got {t_final}")));
        }
        let n = x_in.len();
        if n == 0 {
            return Err(Error::Dimension("empty initial state".into()));
        }
        let p = Self {
            n,
            a_of,
            b_of,
            x_in,
            t_final,
            name: name.to_string(),
        };
        // Probe the samplers once so size mistakes surface at construction.
        p.a_at(0.0)?;
        p.b_at(0.0)?;
        Ok(p)
    }

    /// Frozen-coefficient wrapper around a constant problem.
    pub fn constant(name: &str, p: &OdeProblem) -> Result<Self> {
        let a = p.a().clone();
        let b = p.b().clone();
        Self::new(
            name,
            Arc::new(move |_| Some(a.clone())),
            Arc::new(move |_| Some(b.clone())),
            p.x_in().clone(),
            p.t_final(),
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn x_in(&self) -> &ComplexVector {
        &self.x_in
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn a_at(&self, t: f64) -> Result<ComplexMatrix> {
        let a = (self.a_of)(t)
            .ok_or_else(|| Error::Domain(format!("A(t) is undefined at t = {t}")))?;
        if a.rows() != self.n || a.cols() != self.n {
            return Err(Error::Dimension(format!(
                "A({t}) is {}x{}, expected {n}x{n}",
                a.rows(),
                a.cols(),
                n = self.n
            )));
        }
        Ok(a)
    }

    pub fn b_at(&self, t: f64) -> Result<ComplexVector> {
        let b = (self.b_of)(t)
            .ok_or_else(|| Error::Domain(format!("b(t) is undefined at t = {t}")))?;
        if b.len() != self.n {
            return Err(Error::Dimension(format!(
                "b({t}) has length {}, expected {}",
                b.len(),
                self.n
            )));
        }
        Ok(b)
    }

    /// `A(t)x + b(t)`.
    pub fn rhs(&self, t: f64, x: &ComplexVector) -> Result<ComplexVector> {
        Ok(self.a_at(t)?.mul_vec(x).add(&self.b_at(t)?))
    }
}

fn scalar(x: f64) -> ComplexMatrix {
    ComplexMatrix::from_real(1, 1, &[x]).expect("1x1")
}

/// Names accepted by [`registry`].
pub const REGISTRY: [&str; 4] = ["cosine_drive", "cosine_scale", "frozen_const", "rotating_2x2"];

/// Named problems:
/// - `cosine_drive`: `x' = cos(t)x + sin(t)`, `x(0) = 1`, `T = 1`;
/// - `cosine_scale`: `x' = cos(t)x`, `x(0) = 1`, `T = 1`, solution `e^{sin t}`;
/// - `frozen_const`: a constant 2×2 system with constant forcing;
/// - `rotating_2x2`: `A(t) = ω(t)[[0,−1],[1,0]]`, `ω = 1 + sin(t)/2`, `b = 0`.
pub fn registry(name: &str) -> Result<TimeOdeProblem> {
    match name {
        "cosine_drive" => TimeOdeProblem::new(
            name,
            Arc::new(|t: f64| Some(scalar(t.cos()))),
            Arc::new(|t: f64| Some(ComplexVector::from_real(&[t.sin()]))),
            ComplexVector::from_real(&[1.0]),
            1.0,
        ),
        "cosine_scale" => TimeOdeProblem::new(
            name,
            Arc::new(|t: f64| Some(scalar(t.cos()))),
            Arc::new(|_| Some(ComplexVector::from_real(&[0.0]))),
            ComplexVector::from_real(&[1.0]),
            1.0,
        ),
        "frozen_const" => {
            let a = ComplexMatrix::from_real(2, 2, &[-0.5, 0.3, -0.2, -0.4])?;
            let p = OdeProblem::new(
                a,
                ComplexVector::from_real(&[0.1, -0.2]),
                ComplexVector::from_real(&[1.0, 0.5]),
                1.0,
            )?;
            TimeOdeProblem::constant(name, &p)
        }
        "rotating_2x2" => TimeOdeProblem::new(
            name,
            Arc::new(|t: f64| {
                let w = 1.0 + 0.5 * t.sin();
                ComplexMatrix::from_real(2, 2, &[0.0, -w, w, 0.0]).ok()
            }),
            Arc::new(|_| Some(ComplexVector::from_real(&[0.0, 0.0]))),
            ComplexVector::from_real(&[1.0, 0.0]),
            1.0,
        ),
        other => Err(Error::Parse(format!(
            "unknown problem `{other}` (known: {})",
            REGISTRY.join(", ")
        ))),
    }
}

/// Closed-form `x(T)` where one exists.
pub fn analytic_final_state(p: &TimeOdeProblem) -> Option<ComplexVector> {
    let t = p.t_final();
    match p.name() {
        "cosine_scale" => Some(p.x_in().scale_real(t.sin().exp())),
        "rotating_2x2" => {
            let theta = t + 0.5 * (1.0 - t.cos());
            let (c, s) = (theta.cos(), theta.sin());
            let x = p.x_in();
            Some(ComplexVector::new(vec![x[0] * c - x[1] * s, x[0] * s + x[1] * c]).ok()?)
        }
        _ => None,
    }
}
