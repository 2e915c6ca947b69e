//! The block linear system `C_{m,k,p}(Ah)·X = F` encoding `m` truncated
//! Taylor steps followed by `p` copies of the final state.
//!
//! Block rows are indexed by `g = i(k+1) + j` with `0 ≤ i < m, 0 ≤ j ≤ k`,
//! followed by the tail `i = m, 0 ≤ j ≤ p`; the total is `d + 1` blocks with
//! `d = m(k+1) + p`.

use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::linalg::{
    c64, relative_distance, solve_sparse, spectral_norm, ComplexVector, SparseBuilder,
    SparseMatrix, SparseMethod, ONE,
};
use crate::taylor::{iterate_oracle, OdeProblem};

/// Discretisation parameters of the block system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BcowParams {
    /// Time steps.
    pub m: usize,
    /// Taylor truncation order.
    pub k: usize,
    /// Trailing copies of the final state.
    pub p: usize,
    /// Step size, `m·h = T`.
    pub h: f64,
    /// Target error of the normalised final state.
    pub delta: f64,
    /// Lower bound required of `(k+1)!`.
    pub omega: f64,
    /// `m(k+1) + p`.
    pub d: usize,
}

impl BcowParams {
    /// Parameters with a caller-chosen grid. `omega` is set to `2me³/δ`, the
    /// factorial threshold for a homogeneous problem.
    pub fn fixed(m: usize, k: usize, p: usize, t_final: f64, delta: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("at least one time step is required".into()));
        }
        if !(t_final > 0.0) || !(delta > 0.0) {
            return Err(Error::Domain(format!(
                "need T > 0 and delta > 0, got T = {t_final}, delta = {delta}"
            )));
        }
        Ok(Self {
            m,
            k,
            p,
            h: t_final / m as f64,
            delta,
            omega: 2.0 * m as f64 * E.powi(3) / delta,
            d: m * (k + 1) + p,
        })
    }

    pub(crate) fn check_against(&self, t_final: f64) -> Result<()> {
        if (self.m as f64 * self.h - t_final).abs() > 1e-12 * t_final {
            return Err(Error::Domain(format!(
                "m·h = {} does not match T = {t_final}",
                self.m as f64 * self.h
            )));
        }
        if self.d != self.m * (self.k + 1) + self.p {
            return Err(Error::Domain(format!(
                "d = {} but m(k+1)+p = {}",
                self.d,
                self.m * (self.k + 1) + self.p
            )));
        }
        Ok(())
    }

    /// Number of blocks, `d + 1`.
    pub fn blocks(&self) -> usize {
        self.d + 1
    }

    /// `g = i(k+1) + j` for a valid `(i, j)` pair.
    pub fn block_index(&self, i: usize, j: usize) -> Option<usize> {
        let valid = (i < self.m && j <= self.k) || (i == self.m && j <= self.p);
        valid.then(|| i * (self.k + 1) + j)
    }

    /// Inverse of [`block_index`](Self::block_index).
    pub fn block_coords(&self, g: usize) -> Option<(usize, usize)> {
        if g > self.d {
            return None;
        }
        let tail = self.m * (self.k + 1);
        if g >= tail {
            Some((self.m, g - tail))
        } else {
            Some((g / (self.k + 1), g % (self.k + 1)))
        }
    }
}

/// `ln(n!)` by direct summation; exact enough for factorial comparisons and
/// never overflows.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// `β = 1 + T e² ‖b‖ / ‖x(T)‖`.
pub fn beta_factor(t_final: f64, norm_b: f64, norm_xt: f64) -> f64 {
    if norm_b == 0.0 {
        1.0
    } else {
        1.0 + t_final * E * E * norm_b / norm_xt
    }
}

/// Whether `(k+1)! ≥ 2me³/δ · β`, compared in log space.
pub fn solution_error_hypothesis(m: usize, k: usize, delta: f64, beta: f64) -> bool {
    let ln_omega = (2.0 * m as f64).ln() + 3.0 - delta.ln() + beta.ln();
    ln_factorial(k + 1) >= ln_omega
}

/// Parameter choice for target precision `epsilon`:
/// `h = T/⌈T‖A‖⌉`, `m = p = ⌈T‖A‖⌉`, `δ = ε/(25√m·g)`,
/// `k = ⌈2 ln Ω / ln ln Ω⌉`, then `k` is raised until `k ≥ 5` and
/// `(k+1)! ≥ Ω`.
pub fn select_parameters(
    t_final: f64,
    norm_a: f64,
    epsilon: f64,
    g_est: f64,
    norm_b: f64,
    norm_xt: f64,
) -> Result<BcowParams> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1/2), got {epsilon}")));
    }
    if !(t_final > 0.0) || !(norm_a >= 0.0) || !(g_est >= 1.0) || !(norm_b >= 0.0) {
        return Err(Error::Domain(format!(
            "invalid selection inputs: T = {t_final}, ‖A‖ = {norm_a}, g = {g_est}, ‖b‖ = {norm_b}"
        )));
    }
    if norm_b > 0.0 && !(norm_xt > 0.0) {
        return Err(Error::Domain("‖x(T)‖ must be positive when b ≠ 0".into()));
    }
    let m = if norm_a == 0.0 {
        1
    } else {
        (t_final * norm_a).ceil().max(1.0) as usize
    };
    let h = t_final / m as f64;
    let delta = epsilon / (25.0 * (m as f64).sqrt() * g_est);
    let beta = beta_factor(t_final, norm_b, norm_xt);
    let omega = 2.0 * m as f64 * E.powi(3) / delta * beta;
    let ln_omega = omega.ln();

    let mut k = if omega > E {
        let k0 = (2.0 * ln_omega / ln_omega.ln()).ceil();
        (k0 as usize).max(5)
    } else {
        5
    };
    while ln_factorial(k + 1) < ln_omega {
        k += 1;
    }
    Ok(BcowParams {
        m,
        k,
        p: m,
        h,
        delta,
        omega,
        d: m * (k + 1) + m,
    })
}

/// Selection for a concrete problem. `‖x(T)‖` comes from a coarse `k = 5`
/// run of the recursion, which is enough since `k` depends on it only
/// double-logarithmically.
pub fn select_parameters_for(p: &OdeProblem, epsilon: f64, g_est: f64) -> Result<BcowParams> {
    let norm_a = spectral_norm(p.a());
    let norm_b = p.b().norm();
    let norm_xt = if norm_b > 0.0 {
        let m = if norm_a == 0.0 {
            1
        } else {
            (p.t_final() * norm_a).ceil().max(1.0) as usize
        };
        let coarse = BcowParams::fixed(m, 5, 0, p.t_final(), 0.1)?;
        iterate_oracle(p, &coarse)?.final_state().norm()
    } else {
        1.0
    };
    // A vanishing coarse estimate would make Ω infinite; fall back to ‖b‖·T.
    let norm_xt = if norm_xt > 0.0 { norm_xt } else { norm_b * p.t_final() };
    select_parameters(p.t_final(), norm_a, epsilon, g_est, norm_b, norm_xt)
}

/// Assembled block system together with the problem it encodes.
#[derive(Debug, Clone)]
pub struct SparseBlockSystem {
    pub c: SparseMatrix,
    pub f: ComplexVector,
    /// Block size.
    pub n: usize,
    pub params: BcowParams,
    pub problem: OdeProblem,
}

impl SparseBlockSystem {
    pub fn dim(&self) -> usize {
        self.c.rows()
    }

    /// Block `g` of a solution vector.
    pub fn block(&self, x: &ComplexVector, g: usize) -> ComplexVector {
        x.segment(g * self.n, self.n)
    }

    pub fn x_block(&self, x: &ComplexVector, i: usize, j: usize) -> Option<ComplexVector> {
        self.params.block_index(i, j).map(|g| self.block(x, g))
    }
}

pub fn build_system(p: &OdeProblem, params: &BcowParams) -> Result<SparseBlockSystem> {
    params.check_against(p.t_final())?;
    if params.k == 0 {
        return Err(Error::Domain("the block system needs k >= 1".into()));
    }
    let n = p.dim();
    let (m, k, d) = (params.m, params.k, params.d);
    let dim = (d + 1) * n;
    let mut builder = SparseBuilder::new(dim, dim);

    builder.push_scaled_identity(0, 0, dim, ONE)?;

    let nonzeros_a: Vec<(usize, usize, c64)> = (0..n)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .filter_map(|(r, c)| {
            let v = p.a()[(r, c)];
            (v != c64::new(0.0, 0.0)).then_some((r, c, v))
        })
        .collect();

    for i in 0..m {
        for j in 1..=k {
            let g = i * (k + 1) + j;
            let scale = -params.h / j as f64;
            for &(r, c, v) in &nonzeros_a {
                builder.push(g * n + r, (g - 1) * n + c, v * scale)?;
            }
        }
        let row = (i + 1) * (k + 1);
        for j in 0..=k {
            let col = i * (k + 1) + j;
            builder.push_scaled_identity(row * n, col * n, n, -ONE)?;
        }
    }
    for g in (d - params.p + 1)..=d {
        builder.push_scaled_identity(g * n, (g - 1) * n, n, -ONE)?;
    }

    let mut f = vec![c64::new(0.0, 0.0); dim];
    f[..n].copy_from_slice(p.x_in().as_slice());
    let hb = p.b().scale_real(params.h);
    for i in 0..m {
        let g = i * (k + 1) + 1;
        for r in 0..n {
            f[g * n + r] += hb[r];
        }
    }

    Ok(SparseBlockSystem {
        c: builder.build(),
        f: ComplexVector::new(f)?,
        n,
        params: *params,
        problem: p.clone(),
    })
}

/// Classical stand-in for the linear-systems solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    BlockForward,
    Generic,
}

impl SolveMethod {
    pub fn name(&self) -> &'static str {
        match self {
            SolveMethod::BlockForward => "block_forward",
            SolveMethod::Generic => "generic",
        }
    }
}

impl std::str::FromStr for SolveMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "block_forward" => Ok(SolveMethod::BlockForward),
            "generic" => Ok(SolveMethod::Generic),
            other => Err(Error::Parse(format!(
                "unknown method `{other}` (expected block_forward or generic)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub x: ComplexVector,
    /// Block `x_{m,0}`.
    pub x_final: ComplexVector,
    /// `(p+1)‖x_{m,0}‖² / ‖X‖²`.
    pub success_probability: f64,
    /// `max_i ‖x_{i,0}‖ / ‖x_{m,0}‖` over the step grid.
    pub g_measured: f64,
    /// Relative distance between `x_final` and the recursion oracle.
    pub oracle_deviation: f64,
    /// `max_j ‖x_{m,j} − x_{m,0}‖`, `1 ≤ j ≤ p`.
    pub tail_deviation: f64,
    /// `‖x_{i,0}‖` for `i = 0..=m`.
    pub step_norms: Vec<f64>,
}

pub fn solve_bcow(sys: &SparseBlockSystem, method: SolveMethod) -> Result<SolveReport> {
    let sparse_method = match method {
        SolveMethod::BlockForward => SparseMethod::BlockForward { block: sys.n },
        SolveMethod::Generic => SparseMethod::Generic,
    };
    let x = solve_sparse(&sys.c, &sys.f, sparse_method)?;
    let params = &sys.params;
    let x_final = sys.x_block(&x, params.m, 0).expect("tail block exists");
    let tail_deviation = (1..=params.p)
        .map(|j| sys.x_block(&x, params.m, j).expect("tail block").sub(&x_final).norm())
        .fold(0.0, f64::max);

    let total = x.norm_squared();
    let final_sq = x_final.norm_squared();
    let success_probability = if total > 0.0 {
        (params.p + 1) as f64 * final_sq / total
    } else {
        0.0
    };

    let step_norms: Vec<f64> = (0..=params.m)
        .map(|i| sys.x_block(&x, i, 0).expect("step block").norm())
        .collect();
    let peak = step_norms.iter().cloned().fold(0.0, f64::max);
    let g_measured = if final_sq > 0.0 {
        peak / final_sq.sqrt()
    } else {
        f64::INFINITY
    };

    let oracle = iterate_oracle(&sys.problem, params)?;
    let oracle_deviation = relative_distance(&x_final, oracle.final_state());

    Ok(SolveReport {
        x,
        x_final,
        success_probability,
        g_measured,
        oracle_deviation,
        tail_deviation,
        step_norms,
    })
}

/// Deterministic stand-in for measuring the solution register:
/// `(‖x̂_final − x̂(T)‖, success probability)` with `x̂` the normalised states.
pub fn measurement_emulation(report: &SolveReport, exact_xt: &ComplexVector) -> Result<(f64, f64)> {
    if exact_xt.len() != report.x_final.len() {
        return Err(Error::Dimension("exact state has the wrong length".into()));
    }
    let got = report
        .x_final
        .normalized()
        .ok_or_else(|| Error::DegenerateState("computed final state has zero norm".into()))?;
    let want = exact_xt
        .normalized()
        .ok_or_else(|| Error::DegenerateState("exact final state has zero norm".into()))?;
    Ok((got.sub(&want).norm(), report.success_probability))
}

/// Reported query-count expression `C(A)·s·T·‖A‖ · log(C(A)·s·T·‖A‖·g·β/ε)`.
/// Never used for control flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryFigure {
    pub leading: f64,
    pub log_factor: f64,
    pub total: f64,
    /// Amplitude-amplification repetitions, `O(g)`.
    pub amplification_rounds: f64,
}

pub fn query_complexity_figure(
    c_a: f64,
    sparsity: usize,
    t_final: f64,
    norm_a: f64,
    g: f64,
    beta: f64,
    epsilon: f64,
) -> QueryFigure {
    let leading = c_a * sparsity as f64 * t_final * norm_a;
    let log_factor = (leading * g * beta / epsilon).ln();
    QueryFigure {
        leading,
        log_factor,
        total: leading * log_factor,
        amplification_rounds: g,
    }
}
