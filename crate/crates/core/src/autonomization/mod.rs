//! Time-dependent problems through enlargement and dilation.
//!
//! `x' = A(t)x + b(t)` is first made homogeneous, `u' = B(t)u` with
//! `u = [x; r]` and `B(t) = [[A(t), F(t)], [0, 0]]`, `F = diag(b_i/r_i)`.
//! The time dependence is then moved into an extra coordinate `s`: the
//! transport system `∂_t w = −∂_s w + B(s)w` with `w(0, s) = G(s)u(0)`
//! carries `G(0)u(t)` along the line `s = t`. Discretising `s` on a periodic
//! grid with a Fourier derivative gives the constant generator
//! `Ā = −iP_s ⊗ I + Σ_l |l⟩⟨l| ⊗ B(s_l)`, which the block solver handles.

mod registry;

pub use registry::{analytic_final_state, registry, MatrixSampler, TimeOdeProblem, VectorSampler, REGISTRY};

use std::f64::consts::{E, PI};

use crate::bcow::{build_system, select_parameters, solve_bcow, BcowParams, SolveMethod};
use crate::bounds::{c_of_a, DEFAULT_C_SAMPLES};
use crate::error::{Error, Result};
use crate::linalg::{
    c64, spectral_norm, ComplexMatrix, ComplexVector, SparseBuilder, SparseMatrix,
};
use crate::taylor::{exact_solution, OdeProblem};

/// Default Simpson panel count for `(b_i²)_ave`.
pub const DEFAULT_QUAD: usize = 256;

/// `(1/T)∫₀ᵀ |b_i(t)|² dt` by composite Simpson.
pub fn average_b_squared(p: &TimeOdeProblem, n_quad: usize) -> Result<Vec<f64>> {
    if n_quad < 4 || !n_quad.is_multiple_of(2) {
        return Err(Error::Domain(format!("Simpson needs an even panel count >= 4, got {n_quad}")));
    }
    let t = p.t_final();
    let h = t / n_quad as f64;
    let mut acc = vec![0.0; p.dim()];
    for j in 0..=n_quad {
        let w = if j == 0 || j == n_quad {
            1.0
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let b = p.b_at(j as f64 * h)?;
        for (a, z) in acc.iter_mut().zip(b.iter()) {
            *a += w * z.norm_sqr();
        }
    }
    Ok(acc.into_iter().map(|a| a * h / 3.0 / t).collect())
}

/// Homogeneous form of doubled dimension.
#[derive(Debug, Clone)]
pub struct EnlargedSystem {
    problem: TimeOdeProblem,
    /// `r_i = ((b_i²)_ave + ε²)^{1/2}`.
    pub r: Vec<f64>,
    /// `ε = 1/√N`.
    pub eps_reg: f64,
    pub b_ave_sq: Vec<f64>,
    /// `[x_in; r]`.
    pub u_in: ComplexVector,
}

impl EnlargedSystem {
    pub fn dim(&self) -> usize {
        2 * self.problem.dim()
    }

    pub fn problem(&self) -> &TimeOdeProblem {
        &self.problem
    }

    /// `f_i(t) = b_i(t)/r_i`.
    pub fn f_at(&self, t: f64) -> Result<Vec<c64>> {
        let b = self.problem.b_at(t)?;
        Ok(b.iter().zip(&self.r).map(|(z, r)| z / r).collect())
    }

    /// `B(t) = [[A(t), F(t)], [0, 0]]`.
    pub fn b_matrix(&self, t: f64) -> Result<ComplexMatrix> {
        let n = self.problem.dim();
        let a = self.problem.a_at(t)?;
        let f = self.f_at(t)?;
        let mut m = ComplexMatrix::zeros(2 * n, 2 * n).into_dmatrix();
        m.view_mut((0, 0), (n, n)).copy_from(a.as_dmatrix());
        for (i, fi) in f.into_iter().enumerate() {
            m[(i, n + i)] = fi;
        }
        ComplexMatrix::try_from_dmatrix(m)
    }

    /// `‖b‖_ave = (Σ_i (b_i²)_ave)^{1/2}`.
    pub fn b_ave_norm(&self) -> f64 {
        self.b_ave_sq.iter().sum::<f64>().sqrt()
    }
}

pub fn build_enlarged(p: &TimeOdeProblem) -> Result<EnlargedSystem> {
    build_enlarged_with(p, DEFAULT_QUAD)
}

pub fn build_enlarged_with(p: &TimeOdeProblem, n_quad: usize) -> Result<EnlargedSystem> {
    let b_ave_sq = average_b_squared(p, n_quad)?;
    let eps_reg = 1.0 / (p.dim() as f64).sqrt();
    let r: Vec<f64> = b_ave_sq.iter().map(|b| (b + eps_reg * eps_reg).sqrt()).collect();
    let rv = ComplexVector::from_real(&r);
    Ok(EnlargedSystem {
        problem: p.clone(),
        u_in: ComplexVector::concat(&[p.x_in(), &rv]),
        r,
        eps_reg,
        b_ave_sq,
    })
}

/// `‖x‖² / (‖x‖² + ‖b‖²_ave + 1)`.
pub fn success_probability_enlarged(x_norm: f64, b_ave_norm: f64) -> f64 {
    let x2 = x_norm * x_norm;
    x2 / (x2 + b_ave_norm * b_ave_norm + 1.0)
}

/// `G(s) = e·exp(1/(s²−1))` on `(−1, 1)`, zero elsewhere; `G(0) = 1`.
pub fn mollifier(s: f64) -> f64 {
    if s.abs() < 1.0 {
        E * (1.0 / (s * s - 1.0)).exp()
    } else {
        0.0
    }
}

/// Periodic grid of `N_s` points centred at `T` with half-width `a`:
/// `s_l = T − a + l·(2a/N_s)`, wave numbers `μ_l = (π/a)(l − N_s/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SGrid {
    pub n_s: usize,
    pub center: f64,
    pub half_width: f64,
}

impl SGrid {
    pub fn new(n_s: usize, center: f64, half_width: f64) -> Result<Self> {
        if n_s < 4 || !n_s.is_power_of_two() {
            return Err(Error::Domain(format!(
                "N_s must be a power of two and at least 4, got {n_s}"
            )));
        }
        if !(half_width >= 1.0) || !half_width.is_finite() {
            return Err(Error::Domain(format!("grid half-width must be >= 1, got {half_width}")));
        }
        Ok(Self { n_s, center, half_width })
    }

    /// The mollifier support translated to `T`: `[T−1, T+1]`.
    pub fn unit(n_s: usize, t_final: f64) -> Result<Self> {
        Self::new(n_s, t_final, 1.0)
    }

    /// Smallest centred grid holding the envelope at both `t = 0` and
    /// `t = T`: `[−1, 2T+1]`.
    pub fn enclosing(n_s: usize, t_final: f64) -> Result<Self> {
        Self::new(n_s, t_final, t_final + 1.0)
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n_s as f64
    }

    /// Node `s_l`; the retrieval node is exactly `T`.
    pub fn node(&self, l: usize) -> f64 {
        if l == self.retrieval_index() {
            self.center
        } else {
            self.center - self.half_width + l as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_s).map(|l| self.node(l)).collect()
    }

    pub fn mu(&self) -> Vec<f64> {
        (0..self.n_s)
            .map(|l| PI / self.half_width * (l as f64 - (self.n_s / 2) as f64))
            .collect()
    }

    pub fn retrieval_index(&self) -> usize {
        self.n_s / 2
    }
}

/// Smallest power of two `≥ 4⌈log₂(1/δ)⌉`, and at least 4.
pub fn default_n_s(delta: f64) -> usize {
    let bits = (1.0 / delta).log2().ceil().max(1.0) as usize;
    (4 * bits).next_power_of_two().max(4)
}

/// `P_s = F D F⁻¹` with `F_{jl} = e^{iμ_l(s_j − s_0)}`, `D = diag(μ)`.
/// Since `F/√N_s` is unitary the entries are
/// `(1/N_s) Σ_l μ_l e^{iμ_l(s_j − s_k)}`; the result is symmetrised so it is
/// Hermitian bit for bit.
pub fn build_momentum(grid: &SGrid) -> ComplexMatrix {
    let n = grid.n_s;
    let mu = grid.mu();
    let ds = grid.spacing();
    let mut p = ComplexMatrix::zeros(n, n).into_dmatrix();
    for j in 0..n {
        for k in 0..n {
            let diff = (j as f64 - k as f64) * ds;
            let sum: c64 = mu
                .iter()
                .map(|&m| c64::from_polar(m, m * diff))
                .sum();
            p[(j, k)] = sum / n as f64;
        }
    }
    let herm = (&p + p.adjoint()) * c64::new(0.5, 0.0);
    ComplexMatrix::try_from_dmatrix(herm).expect("finite momentum matrix")
}

#[derive(Debug, Clone)]
pub struct DilatedSystem {
    pub grid: SGrid,
    pub p_s: ComplexMatrix,
    pub mu: Vec<f64>,
    /// `−iP_s ⊗ I + Σ_l |l⟩⟨l| ⊗ B(s_l)`, s-index leading.
    pub a_bar: SparseMatrix,
    /// `[G(s_0), …, G(s_{N_s−1})] ⊗ u_in`.
    pub w_in: ComplexVector,
    /// Size of one s-block, `2N`.
    pub block: usize,
    pub enlarged: EnlargedSystem,
}

impl DilatedSystem {
    pub fn dim(&self) -> usize {
        self.block * self.grid.n_s
    }

    /// Block `l` of a dilated state.
    pub fn s_block(&self, w: &ComplexVector, l: usize) -> ComplexVector {
        w.segment(l * self.block, self.block)
    }
}

pub fn build_dilated(p: &TimeOdeProblem, grid: &SGrid) -> Result<DilatedSystem> {
    let enlarged = build_enlarged(p)?;
    let block = enlarged.dim();
    let n_s = grid.n_s;
    let p_s = build_momentum(grid);
    let dim = block * n_s;
    let mut builder = SparseBuilder::new(dim, dim);
    let minus_i = c64::new(0.0, -1.0);
    for l in 0..n_s {
        for lp in 0..n_s {
            let v = minus_i * p_s[(l, lp)];
            builder.push_scaled_identity(l * block, lp * block, block, v)?;
        }
    }
    for l in 0..n_s {
        let s = grid.node(l);
        let b = enlarged
            .b_matrix(s)
            .map_err(|e| Error::Domain(format!("cannot evaluate B at s_{l} = {s}: {e}")))?;
        builder.push_block(l * block, l * block, b.as_dmatrix())?;
    }
    let weights: Vec<f64> = grid.nodes().into_iter().map(mollifier).collect();
    let w_in = ComplexVector::kron_weights(&weights, &enlarged.u_in);
    Ok(DilatedSystem {
        grid: *grid,
        mu: grid.mu(),
        p_s,
        a_bar: builder.build(),
        w_in,
        block,
        enlarged,
    })
}

#[derive(Debug, Clone)]
pub struct TdSolveReport {
    pub x_final: ComplexVector,
    /// Retrieved `u(T)`, i.e. `[x(T); r]` up to discretisation error.
    pub u_final: ComplexVector,
    pub params: BcowParams,
    pub norm_a_bar: f64,
    /// `‖x(T)‖² / max_i ‖w(t_i)‖²` over the step grid.
    pub success_probability: f64,
    pub dilated: DilatedSystem,
}

/// Dilate, solve `w' = Āw` with the block solver at precision `epsilon`, and
/// read `x(T)` from node `N_s/2`.
pub fn solve_time_dependent(p: &TimeOdeProblem, epsilon: f64, grid: &SGrid) -> Result<TdSolveReport> {
    if (grid.center - p.t_final()).abs() > 0.0 {
        return Err(Error::Domain(format!(
            "grid is centred at {} but T = {}",
            grid.center,
            p.t_final()
        )));
    }
    let dil = build_dilated(p, grid)?;
    let a_dense = dil.a_bar.to_dense();
    let norm_a_bar = spectral_norm(&a_dense);
    let ode = OdeProblem::new(a_dense, ComplexVector::zeros(dil.dim()), dil.w_in.clone(), p.t_final())?;
    let params = select_parameters(p.t_final(), norm_a_bar, epsilon, 1.0, 0.0, 1.0)?;
    let sys = build_system(&ode, &params)?;
    let rep = solve_bcow(&sys, SolveMethod::BlockForward)?;

    let u_final = dil
        .s_block(&rep.x_final, grid.retrieval_index())
        .scale_real(1.0 / mollifier(0.0));
    let x_final = u_final.segment(0, p.dim());
    let peak = rep.step_norms.iter().cloned().fold(0.0, f64::max);
    let success_probability = if peak > 0.0 {
        x_final.norm_squared() / (peak * peak)
    } else {
        0.0
    };
    Ok(TdSolveReport {
        x_final,
        u_final,
        params,
        norm_a_bar,
        success_probability,
        dilated: dil,
    })
}

/// Classical RK4 with `n_steps` fixed steps on the original system.
pub fn reference_time_dependent(p: &TimeOdeProblem, n_steps: usize) -> Result<ComplexVector> {
    if n_steps < 16 {
        return Err(Error::Domain(format!("RK4 reference needs >= 16 steps, got {n_steps}")));
    }
    let h = p.t_final() / n_steps as f64;
    let mut x = p.x_in().clone();
    for i in 0..n_steps {
        let t = i as f64 * h;
        let k1 = p.rhs(t, &x)?;
        let k2 = p.rhs(t + h / 2.0, &x.add(&k1.scale_real(h / 2.0)))?;
        let k3 = p.rhs(t + h / 2.0, &x.add(&k2.scale_real(h / 2.0)))?;
        let k4 = p.rhs(t + h, &x.add(&k3.scale_real(h)))?;
        let incr = k1.add(&k2.scale_real(2.0)).add(&k3.scale_real(2.0)).add(&k4);
        x = x.add(&incr.scale_real(h / 6.0));
    }
    Ok(x)
}

#[derive(Debug, Clone)]
pub struct CertifiedReference {
    pub x: ComplexVector,
    /// Richardson estimate `‖x_{2n} − x_n‖/15` of the error in `x`.
    pub error_estimate: f64,
    pub steps: usize,
}

/// Target for the Richardson estimate of the reference error.
pub const REFERENCE_TOL: f64 = 1e-10;

/// Doubles the RK4 step count from 64 until the Richardson estimate is far
/// below [`REFERENCE_TOL`], or stops improving while already below it.
pub fn certified_reference(p: &TimeOdeProblem) -> Result<CertifiedReference> {
    let mut n = 64;
    let mut coarse = reference_time_dependent(p, n)?;
    let mut prev = f64::INFINITY;
    while n <= 1 << 18 {
        let fine = reference_time_dependent(p, 2 * n)?;
        let est = fine.sub(&coarse).norm() / 15.0;
        if est <= 1e-2 * REFERENCE_TOL || (est <= REFERENCE_TOL && est >= prev) {
            return Ok(CertifiedReference {
                x: fine,
                error_estimate: est,
                steps: 2 * n,
            });
        }
        prev = est;
        coarse = fine;
        n *= 2;
    }
    Err(Error::Domain(format!(
        "RK4 reference for `{}` did not reach {REFERENCE_TOL:e}",
        p.name()
    )))
}

/// Frozen-coefficient solutions `x^{(l)}(t)` with data `G(s_l)x_in`, sampled
/// at `t_j = jT/n_times`.
pub fn per_node_trajectories(
    p: &TimeOdeProblem,
    grid: &SGrid,
    n_times: usize,
) -> Result<Vec<Vec<ComplexVector>>> {
    if n_times == 0 {
        return Err(Error::Domain("need at least one time sample".into()));
    }
    let t = p.t_final();
    grid.nodes()
        .into_iter()
        .map(|s| {
            let ode = OdeProblem::new(p.a_at(s)?, p.b_at(s)?, p.x_in().scale_real(mollifier(s)), t)?;
            (0..=n_times)
                .map(|j| exact_solution(&ode, if j == n_times { t } else { j as f64 * t / n_times as f64 }))
                .collect()
        })
        .collect()
}

/// Reported constants for the time-dependent query count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TdComplexity {
    /// `max_l C(A(s_l))`.
    pub c_a: f64,
    /// `1 + max_l ‖A(s_l)‖ + max_{i,l} |f_i(s_l)|`.
    pub norm_a_m: f64,
    pub g: f64,
    pub b_ave_norm: f64,
    /// Row sparsity of `Ā`.
    pub sparsity: usize,
    /// `s·C_A·‖A‖_m·T`.
    pub leading: f64,
}

pub fn td_complexity_report(p: &TimeOdeProblem, dil: &DilatedSystem, x_t_norm: f64) -> Result<TdComplexity> {
    let t = p.t_final();
    let mut c_a = 0.0f64;
    let mut max_a = 0.0f64;
    let mut max_f = 0.0f64;
    let mut max_f_norm = 0.0f64;
    for s in dil.grid.nodes() {
        let a = p.a_at(s)?;
        c_a = c_a.max(c_of_a(&a, t, DEFAULT_C_SAMPLES)?);
        max_a = max_a.max(spectral_norm(&a));
        let f = dil.enlarged.f_at(s)?;
        max_f = f.iter().map(|z| z.norm()).fold(max_f, f64::max);
        max_f_norm = max_f_norm.max(f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
    }
    let peak = per_node_trajectories(p, &dil.grid, 32)?
        .iter()
        .flatten()
        .map(|x| x.norm())
        .fold(0.0, f64::max);
    let b_ave_norm = dil.enlarged.b_ave_norm();
    let g = if x_t_norm > 0.0 {
        (peak + b_ave_norm + 1.0) / x_t_norm * (1.0 + t * max_f_norm)
    } else {
        f64::INFINITY
    };
    let norm_a_m = 1.0 + max_a + max_f;
    let sparsity = dil.a_bar.max_row_nnz();
    Ok(TdComplexity {
        c_a,
        norm_a_m,
        g,
        b_ave_norm,
        sparsity,
        leading: sparsity as f64 * c_a * norm_a_m * t,
    })
}
