use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Deserialize;

use bcow_core::autonomization::{
    analytic_final_state, certified_reference, registry, solve_time_dependent, td_complexity_report, SGrid,
};
use bcow_core::bcow::{
    beta_factor, build_system, query_complexity_figure, select_parameters_for, solve_bcow, BcowParams,
};
use bcow_core::bounds::{
    c_of_a, dense_singular_values, hypothesis_delta, verify_all, verify_solution_error, CheckEntry,
    KappaV, MatrixFamily, VerifyOptions,
};
use bcow_core::linalg::{relative_distance, spectral_norm, ComplexMatrix, ComplexVector, MatrixFile};
use bcow_core::taylor::{exact_solution, OdeProblem};

use crate::config::{Cell, ExperimentConfig, Forcing, GridKind, Mode, ProblemSpec};

/// `splitmix64` finaliser applied to `seed` and the cell index, so each cell
/// gets an independent stream regardless of scheduling.
pub fn cell_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed ^ (index as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct SolveRow {
    pub problem: String,
    pub params: BcowParams,
    pub state_error: f64,
    pub success_probability: f64,
    pub g_measured: f64,
    pub oracle_deviation: f64,
    pub kappa_empirical: Option<f64>,
    pub leading_query_factor: f64,
    pub check: CheckEntry,
}

#[derive(Debug, Clone)]
pub struct BoundsRow {
    pub family: String,
    pub n: usize,
    pub params: BcowParams,
    pub c_a: f64,
    pub kappa_v: KappaV,
    pub norm_c: f64,
    pub bound_norm_c: f64,
    pub kappa: f64,
    pub bound_kappa: f64,
    pub inv_norm: f64,
    pub bound_inv: f64,
    pub i1: f64,
    pub i1_bound: f64,
    pub i2: f64,
    pub i2_bound: f64,
    pub pass_all: bool,
    pub checks: Vec<CheckEntry>,
}

#[derive(Debug, Clone)]
pub struct AutonomizeRow {
    pub problem: String,
    pub n_s: usize,
    pub params: BcowParams,
    pub err_final: f64,
    pub err_reference_budget: f64,
    pub pr: f64,
    pub c_a: f64,
    pub norm_a_m: f64,
    pub g: f64,
}

#[derive(Debug, Clone)]
pub enum Row {
    Solve(SolveRow),
    Bounds(BoundsRow),
    Autonomize(AutonomizeRow),
}

impl Row {
    /// Names of checks that measured above their bound.
    pub fn failed_checks(&self) -> Vec<String> {
        match self {
            Row::Solve(r) if r.check.failed() => vec![r.check.name.clone()],
            Row::Bounds(r) => {
                let mut v: Vec<String> = r.checks.iter().filter(|c| c.failed()).map(|c| c.name.clone()).collect();
                if !r.pass_all && v.is_empty() {
                    v.push("inverse_columns".into());
                }
                v
            }
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CellRecord {
    pub index: usize,
    pub cell: Cell,
    pub elapsed: Duration,
    pub outcome: Result<Row, String>,
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    /// Kind of every cell in the record.
    pub mode: Mode,
    pub config: ExperimentConfig,
    pub cells: Vec<CellRecord>,
    pub version: &'static str,
}

impl RunRecord {
    pub fn failed_checks(&self) -> usize {
        self.cells
            .iter()
            .filter_map(|c| c.outcome.as_ref().ok())
            .map(|r| r.failed_checks().len())
            .sum()
    }

    pub fn errors(&self) -> usize {
        self.cells.iter().filter(|c| c.outcome.is_err()).count()
    }

    /// 1 when any bound check failed, 2 when only cell errors occurred.
    pub fn exit_code(&self) -> i32 {
        if self.failed_checks() > 0 {
            1
        } else if self.errors() > 0 {
            2
        } else {
            0
        }
    }
}

/// JSON problem file: each field a matrix file, plus `t_final`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    a: MatrixFile,
    b: MatrixFile,
    x_in: MatrixFile,
    t_final: f64,
}

pub fn load_problem_file(path: &Path) -> anyhow::Result<OdeProblem> {
    let text = std::fs::read_to_string(path)?;
    let f: ProblemFile = serde_json::from_str(&text)?;
    Ok(OdeProblem::new(f.a.to_matrix()?, f.b.to_vector()?, f.x_in.to_vector()?, f.t_final)?)
}

/// Parses a family, filling in the seed of random families that omit it.
pub fn resolve_family(spec: &str, seed: u64) -> anyhow::Result<MatrixFamily> {
    match spec.parse::<MatrixFamily>() {
        Ok(f) => Ok(f),
        Err(first) => {
            if spec.starts_with("random_") {
                Ok(format!("{spec}:{seed}").parse::<MatrixFamily>()?)
            } else {
                Err(first.into())
            }
        }
    }
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> ComplexVector {
    let v: Vec<f64> = (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut *rng);
            scale * z
        })
        .collect();
    ComplexVector::from_real(&v)
}

fn family_problem(
    family: &MatrixFamily,
    t_final: f64,
    forcing: Forcing,
    rng: &mut ChaCha8Rng,
) -> anyhow::Result<OdeProblem> {
    let a = family.generate()?;
    let n = a.rows();
    let x_in = random_vector(rng, n, 1.0);
    let b = match forcing {
        Forcing::None => ComplexVector::zeros(n),
        Forcing::Random => random_vector(rng, n, 0.5),
    };
    Ok(OdeProblem::new(a, b, x_in, t_final)?)
}

fn auto_m(a: &ComplexMatrix, t_final: f64) -> usize {
    let norm = spectral_norm(a);
    if norm == 0.0 {
        1
    } else {
        (t_final * norm).ceil().max(1.0) as usize
    }
}

fn exact_beta(p: &OdeProblem) -> anyhow::Result<(ComplexVector, f64)> {
    let xt = exact_solution(p, p.t_final())?;
    let nb = p.b().norm();
    let beta = if nb == 0.0 { 1.0 } else { beta_factor(p.t_final(), nb, xt.norm()) };
    Ok((xt, beta))
}

fn solve_cell(cfg: &ExperimentConfig, spec: &ProblemSpec, seed: u64) -> anyhow::Result<SolveRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (label, problem) = match (&spec.file, &spec.family) {
        (Some(path), _) => (path.display().to_string(), load_problem_file(path)?),
        (None, Some(f)) => {
            let fam = resolve_family(f, seed)?;
            (fam.to_string(), family_problem(&fam, spec.t_final, spec.forcing, &mut rng)?)
        }
        (None, None) => anyhow::bail!("problem needs `file` or `family`"),
    };
    let (xt, beta) = exact_beta(&problem)?;
    let params = if spec.m.is_none() && spec.k.is_none() {
        select_parameters_for(&problem, cfg.epsilon, 1.0)?
    } else {
        let selected = select_parameters_for(&problem, cfg.epsilon, 1.0)?;
        let m = spec.m.unwrap_or_else(|| auto_m(problem.a(), problem.t_final()));
        let k = spec.k.unwrap_or(selected.k);
        BcowParams::fixed(m, k, m, problem.t_final(), hypothesis_delta(m, k, beta))?
    };
    let sys = build_system(&problem, &params)?;
    let rep = solve_bcow(&sys, cfg.method()?)?;
    let state_error = match (rep.x_final.normalized(), xt.normalized()) {
        (Some(a), Some(b)) => a.sub(&b).norm(),
        _ => relative_distance(&rep.x_final, &xt),
    };
    let kappa_empirical = dense_singular_values(&sys, cfg.tolerances.dense_cap).map(|(a, b)| a / b);
    let c_a = c_of_a(problem.a(), problem.t_final(), cfg.tolerances.c_samples)?;
    let fig = query_complexity_figure(
        c_a,
        problem.a().row_sparsity(),
        problem.t_final(),
        spectral_norm(problem.a()),
        rep.g_measured,
        beta,
        cfg.epsilon,
    );
    Ok(SolveRow {
        problem: label,
        params,
        state_error,
        success_probability: rep.success_probability,
        g_measured: rep.g_measured,
        oracle_deviation: rep.oracle_deviation,
        kappa_empirical,
        leading_query_factor: fig.leading,
        check: verify_solution_error(&problem, &params)?,
    })
}

fn bounds_cell(
    cfg: &ExperimentConfig,
    family: &str,
    t_final: f64,
    m: Option<usize>,
    k: usize,
    forcing: Forcing,
    seed: u64,
) -> anyhow::Result<BoundsRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fam = resolve_family(family, seed)?;
    let problem = family_problem(&fam, t_final, forcing, &mut rng)?;
    let m = m.unwrap_or_else(|| auto_m(problem.a(), t_final));
    let (_, beta) = exact_beta(&problem)?;
    let params = BcowParams::fixed(m, k, m, t_final, hypothesis_delta(m, k, beta))?;
    let opts = VerifyOptions {
        c_samples: cfg.tolerances.c_samples,
        dense_cap: cfg.tolerances.dense_cap,
        column_cap: cfg.tolerances.column_cap,
    };
    let rep = verify_all(&problem, &params, &opts)?;
    Ok(BoundsRow {
        family: fam.to_string(),
        n: problem.dim(),
        params,
        c_a: rep.c_a,
        kappa_v: rep.kappa_v,
        norm_c: rep.norm_c,
        bound_norm_c: rep.bound_norm_c,
        kappa: rep.kappa,
        bound_kappa: rep.bound_kappa,
        inv_norm: rep.inv_norm,
        bound_inv: rep.bound_inv_norm,
        i1: rep.i1_norm,
        i1_bound: rep.i1_bound,
        i2: rep.i2_norm,
        i2_bound: rep.i2_bound,
        pass_all: rep.pass_all(),
        checks: rep.checks,
    })
}

fn autonomize_cell(cfg: &ExperimentConfig, problem: &str, n_s: usize, grid: GridKind) -> anyhow::Result<AutonomizeRow> {
    let p = registry(problem)?;
    let g = match grid {
        GridKind::Enclosing => SGrid::enclosing(n_s, p.t_final())?,
        GridKind::Unit => SGrid::unit(n_s, p.t_final())?,
    };
    let (reference, budget) = match analytic_final_state(&p) {
        Some(x) => (x, 0.0),
        None => {
            let r = certified_reference(&p)?;
            (r.x, r.error_estimate)
        }
    };
    let rep = solve_time_dependent(&p, cfg.epsilon, &g)?;
    let cx = td_complexity_report(&p, &rep.dilated, reference.norm())?;
    Ok(AutonomizeRow {
        problem: problem.to_string(),
        n_s,
        params: rep.params,
        err_final: rep.x_final.sub(&reference).norm(),
        err_reference_budget: budget,
        pr: rep.success_probability,
        c_a: cx.c_a,
        norm_a_m: cx.norm_a_m,
        g: cx.g,
    })
}

pub fn run_cell(cfg: &ExperimentConfig, index: usize, cell: &Cell) -> CellRecord {
    let seed = cell_seed(cfg.seed, index);
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| -> anyhow::Result<Row> {
        Ok(match cell {
            Cell::Solve { problem } => Row::Solve(solve_cell(cfg, problem, seed)?),
            Cell::Bounds { family, t_final, m, k, forcing } => {
                Row::Bounds(bounds_cell(cfg, family, *t_final, *m, *k, *forcing, seed)?)
            }
            Cell::Autonomize { problem, n_s, grid } => Row::Autonomize(autonomize_cell(cfg, problem, *n_s, *grid)?),
        })
    }));
    let outcome = match outcome {
        Ok(Ok(row)) => Ok(row),
        Ok(Err(e)) => Err(format!("{e:#}")),
        Err(panic) => Err(match panic.downcast_ref::<&str>() {
            Some(s) => format!("panic: {s}"),
            None => match panic.downcast_ref::<String>() {
                Some(s) => format!("panic: {s}"),
                None => "panic".into(),
            },
        }),
    };
    CellRecord {
        index,
        cell: cell.clone(),
        elapsed: start.elapsed(),
        outcome,
    }
}

/// Runs every cell, in parallel over `jobs` threads (0 = all cores), and
/// returns the records in cell order.
pub fn run(cfg: &ExperimentConfig, jobs: usize) -> anyhow::Result<RunRecord> {
    cfg.validate()?;
    let cells = cfg.cells();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let records: Vec<CellRecord> = pool.install(|| {
        cells
            .par_iter()
            .enumerate()
            .map(|(i, c)| run_cell(cfg, i, c))
            .collect()
    });
    Ok(RunRecord {
        mode: cfg.cell_mode(),
        config: cfg.clone(),
        cells: records,
        version: env!("CARGO_PKG_VERSION"),
    })
}
