//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the output.
//! The process fails when a criterion fails that is not listed in
//! `KNOWN_RED`, or when a listed one starts passing (so the list cannot go
//! stale).

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use bcow_core::autonomization::{
    build_dilated, build_momentum, certified_reference, registry, solve_time_dependent, SGrid,
};
use bcow_core::bcow::{beta_factor, build_system, select_parameters_for, solve_bcow, BcowParams, SolveMethod};
use bcow_core::bounds::{
    c_of_a, check_constants, dense_singular_values, error_decomposition, kappa_v, hypothesis_delta,
    verify_inverse_column_bounds, verify_kappa_bound, verify_power_bound, verify_solution_error, CheckEntry,
    CheckStatus, KappaV, MatrixFamily, DENSE_CAP,
};
use bcow_core::linalg::{c64, expm, integral_expm, relative_distance, spectral_norm, ComplexMatrix, ComplexVector};
use bcow_core::taylor::{exact_solution, iterate_oracle, s_k, t_k, OdeProblem};

use bcow_harness::config::parse_config;
use bcow_harness::emit::to_csv_string;
use bcow_harness::run::run;

/// Criteria expected to fail; see the decisions ledger for the analysis.
const KNOWN_RED: &[usize] = &[10];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> ComplexVector {
    let v: Vec<f64> = (0..n).map(|_| gaussian(rng)).collect();
    ComplexVector::from_real(&v)
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let v: Vec<f64> = (0..n * n).map(|_| gaussian(rng)).collect();
    ComplexMatrix::from_real(n, n, &v).unwrap()
}

fn exact_beta(p: &OdeProblem) -> f64 {
    let nb = p.b().norm();
    if nb == 0.0 {
        1.0
    } else {
        beta_factor(p.t_final(), nb, exact_solution(p, p.t_final()).unwrap().norm())
    }
}

fn auto_m(a: &ComplexMatrix, t: f64) -> usize {
    ((t * spectral_norm(a)).ceil() as usize).max(1)
}

/// `m` steps of size `T/m`, `k` terms and the smallest `δ` the solution
/// error hypothesis allows for them.
fn compliant(p: &OdeProblem, m: usize, k: usize) -> BcowParams {
    let delta = hypothesis_delta(m, k, exact_beta(p));
    BcowParams::fixed(m, k, m, p.t_final(), delta).unwrap()
}

// ---------------------------------------------------------------- 1

fn c1_structure() -> Outcome {
    let (a, h) = (0.8, 0.5);
    let p = OdeProblem::new(
        ComplexMatrix::from_real(1, 1, &[a]).unwrap(),
        ComplexVector::from_real(&[0.3]),
        ComplexVector::from_real(&[1.0]),
        1.0,
    )
    .unwrap();
    let params = BcowParams::fixed(2, 3, 2, 1.0, 0.1).unwrap();
    let sys = build_system(&p, &params).unwrap();

    // The displayed 11×11 pattern, written out by hand.
    let mut want = vec![vec![0.0; 11]; 11];
    for (i, row) in want.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for step in 0..2 {
        let base = 4 * step;
        for j in 1..=3 {
            want[base + j][base + j - 1] = -a * h / j as f64;
        }
        for j in 0..=3 {
            want[base + 4][base + j] = -1.0;
        }
    }
    want[9][8] = -1.0;
    want[10][9] = -1.0;

    let mut mismatches = 0;
    let mut blocks = 0;
    for (r, row) in want.iter().enumerate() {
        for (c, &w) in row.iter().enumerate() {
            if w != 0.0 {
                blocks += 1;
            }
            if sys.c.get(r, c) != c64::new(w, 0.0) {
                mismatches += 1;
            }
        }
    }
    let pass = sys.dim() == 11 && sys.c.nnz() == 27 && blocks == 27 && mismatches == 0;
    outcome(
        pass,
        format!("dim {}, nnz {}, {mismatches} entry mismatches", sys.dim(), sys.c.nnz()),
    )
}

// ---------------------------------------------------------------- 2

fn c2_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst_oracle, mut worst_generic) = (0.0f64, 0.0f64);
    let count = 120;
    for _ in 0..count {
        let n = rng.gen_range(1..=8);
        let m = rng.gen_range(1..=8);
        let k = rng.gen_range(5..=12);
        let t = rng.gen_range(0.25..3.0);
        let h = t / m as f64;
        let raw = random_matrix(&mut rng, n);
        let target: f64 = rng.gen_range(0.05..1.0);
        let a = raw.scale_real(target / (spectral_norm(&raw) * h));
        let b = if rng.gen_bool(0.5) { random_vector(&mut rng, n) } else { ComplexVector::zeros(n) };
        let p = OdeProblem::new(a, b, random_vector(&mut rng, n), t).unwrap();
        let params = BcowParams::fixed(m, k, m, t, 0.1).unwrap();
        let sys = build_system(&p, &params).unwrap();
        let fwd = solve_bcow(&sys, SolveMethod::BlockForward).unwrap().x_final;
        let gen = solve_bcow(&sys, SolveMethod::Generic).unwrap().x_final;
        let oracle = iterate_oracle(&p, &params).unwrap();
        worst_oracle = worst_oracle.max(relative_distance(&fwd, oracle.final_state()));
        worst_generic = worst_generic.max(relative_distance(&fwd, &gen));
    }
    outcome(
        worst_oracle <= 1e-9 && worst_generic <= 1e-9,
        format!("{count} problems, worst vs oracle {worst_oracle:.2e}, vs generic {worst_generic:.2e}"),
    )
}

// ---------------------------------------------------------------- 3

fn stable_family(rng: &mut ChaCha8Rng, i: usize) -> MatrixFamily {
    match i % 4 {
        0 => MatrixFamily::RandomDiagonalizable {
            n: rng.gen_range(2..=6),
            target_kappa_v: 10f64.powf(rng.gen_range(0.0..4.0)),
            seed: rng.gen(),
        },
        1 => MatrixFamily::JordanBlock {
            n: rng.gen_range(2..=6),
            eigenvalue: rng.gen_range(-1.5..-0.1),
        },
        2 => MatrixFamily::NonNormal2x2 {
            k: rng.gen_range(1.0..20.0),
            split: 10f64.powf(rng.gen_range(-9.0..0.0)),
        },
        _ => MatrixFamily::Diagonal {
            spectrum: (0..rng.gen_range(1..=5)).map(|_| rng.gen_range(-2.0..0.0)).collect(),
        },
    }
}

fn c3_solution_error() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut violations, mut untested, mut worst_ratio) = (0, 0, 0.0f64);
    let mut first_reason = String::new();
    let count = 64;
    for i in 0..count {
        let a = stable_family(&mut rng, i).generate().unwrap();
        let n = a.rows();
        let t = [0.5, 1.0, 2.0][i % 3];
        let b = if i % 2 == 0 { random_vector(&mut rng, n).scale_real(0.5) } else { ComplexVector::zeros(n) };
        let p = OdeProblem::new(a, b, random_vector(&mut rng, n), t).unwrap();
        let m = auto_m(p.a(), t) + rng.gen_range(0..3);
        let k = rng.gen_range(5..=12);
        let params = compliant(&p, m, k);

        let e = verify_solution_error(&p, &params).unwrap();
        if let CheckStatus::NotApplicable(r) | CheckStatus::Skipped(r) = &e.status {
            untested += 1;
            if first_reason.is_empty() {
                first_reason = r.clone();
            }
            continue;
        }
        // Recompute against the oracle directly rather than trusting the entry.
        let sys = build_system(&p, &params).unwrap();
        let got = solve_bcow(&sys, SolveMethod::BlockForward).unwrap().x_final.normalized().unwrap();
        let want = exact_solution(&p, t).unwrap().normalized().unwrap();
        let err = got.sub(&want).norm();
        worst_ratio = worst_ratio.max(err / params.delta);
        if err > params.delta || e.failed() {
            violations += 1;
        }
    }
    outcome(
        violations == 0 && untested == 0,
        format!(
            "{count} problems, {violations} violations, {untested} untested{}, worst error/δ {worst_ratio:.2e}",
            if first_reason.is_empty() { String::new() } else { format!(" ({first_reason})") }
        ),
    )
}

// ---------------------------------------------------------------- 4 to 8

struct Config {
    family: String,
    p: OdeProblem,
    params: BcowParams,
}

const SWEEP_FAMILIES: [&str; 8] = [
    "random_diagonalizable:4:10:1",
    "random_diagonalizable:5:1000:2",
    "jordan_block:4:-1",
    "jordan_block:6:-0.5",
    "non_normal_2x2:5:1e-9",
    "non_normal_2x2:20:0.5",
    "random_sparse:8:2:3",
    "diagonal:-1,-2,-3",
];

fn sweep_configs() -> Vec<Config> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut out = Vec::new();
    for spec in SWEEP_FAMILIES {
        let a = spec.parse::<MatrixFamily>().unwrap().generate().unwrap();
        let n = a.rows();
        for t in [1.0, 2.0] {
            for forced in [false, true] {
                let b = if forced { random_vector(&mut rng, n).scale_real(0.5) } else { ComplexVector::zeros(n) };
                let p = OdeProblem::new(a.clone(), b, random_vector(&mut rng, n), t).unwrap();
                let m0 = auto_m(&a, t);
                for k in [5, 6, 8] {
                    for m in [m0, m0 + 2] {
                        out.push(Config {
                            family: spec.to_string(),
                            p: p.clone(),
                            params: compliant(&p, m, k),
                        });
                    }
                }
            }
        }
    }
    out
}

struct SweepTally {
    tested: usize,
    untested: usize,
    violations: Vec<String>,
}

impl SweepTally {
    fn new() -> Self {
        Self { tested: 0, untested: 0, violations: Vec::new() }
    }

    fn record(&mut self, cfg: &Config, e: &CheckEntry) {
        match e.status {
            CheckStatus::Pass => self.tested += 1,
            CheckStatus::Fail => {
                self.tested += 1;
                self.violations.push(format!(
                    "{} m={} k={}: {} {:.3e} > {:.3e}",
                    cfg.family, cfg.params.m, cfg.params.k, e.name, e.measured, e.bound
                ));
            }
            _ => self.untested += 1,
        }
    }

    fn outcome(self, extra: String) -> Outcome {
        let pass = self.violations.is_empty() && self.tested > 0;
        let mut detail = format!(
            "{} tested, {} not applicable, {} violations{extra}",
            self.tested,
            self.untested,
            self.violations.len()
        );
        if let Some(v) = self.violations.first() {
            detail.push_str(&format!("; first: {v}"));
        }
        outcome(pass, detail)
    }
}

fn c4_norm(configs: &[Config]) -> Outcome {
    let mut tally = SweepTally::new();
    let mut worst = 0.0f64;
    for cfg in configs {
        let ah = spectral_norm(cfg.p.a()) * cfg.params.h;
        if cfg.params.k < 5 || ah > 1.0 {
            tally.untested += 1;
            continue;
        }
        let sys = build_system(&cfg.p, &cfg.params).unwrap();
        // Power iteration above the dense cap; it only underestimates.
        let smax = match dense_singular_values(&sys, DENSE_CAP) {
            Some((smax, _)) => smax,
            None => sys.c.norm_estimate(200),
        };
        let bound = 2.0 * (cfg.params.k as f64).sqrt() * (1.0 + 1e-9);
        worst = worst.max(smax / bound);
        tally.record(cfg, &CheckEntry::compare("norm_C", smax, bound));
    }
    tally.outcome(format!(", worst ‖C‖/bound {worst:.3}"))
}

fn c5_condition(configs: &[Config]) -> Outcome {
    let mut tally = SweepTally::new();
    let mut gap_shown = String::new();
    for cfg in configs {
        let sys = build_system(&cfg.p, &cfg.params).unwrap();
        if sys.dim() > DENSE_CAP {
            tally.untested += 1;
            continue;
        }
        let c_a = c_of_a(cfg.p.a(), cfg.p.t_final(), 256).unwrap();
        let (kappa, inv) = verify_kappa_bound(&sys, c_a, DENSE_CAP).unwrap();
        tally.record(cfg, &kappa);
        tally.record(cfg, &inv);
        if gap_shown.is_empty() && kappa.passed() {
            if let KappaV::Finite(kv) = kappa_v(cfg.p.a()).unwrap() {
                let slack = kappa.bound / kappa.measured;
                if kv / c_a > 1e3 && slack < 1e3 {
                    gap_shown = format!(
                        "{}: κ_V/C(A) = {:.2e}, bound/κ = {slack:.1}",
                        cfg.family,
                        kv / c_a
                    );
                }
            }
        }
    }
    let shown = !gap_shown.is_empty();
    let mut o = tally.outcome(format!(", gap family {}", if shown { &gap_shown } else { "none" }));
    o.pass &= shown;
    o
}

fn c6_columns(configs: &[Config]) -> Outcome {
    let (mut columns, mut tail_columns, mut bad, mut inexact, mut skipped) = (0, 0, 0, 0, 0);
    for cfg in configs {
        let sys = build_system(&cfg.p, &cfg.params).unwrap();
        if sys.dim() > 2048 {
            skipped += 1;
            continue;
        }
        let c_a = c_of_a(cfg.p.a(), cfg.p.t_final(), 256).unwrap();
        for col in verify_inverse_column_bounds(&sys, c_a).unwrap() {
            columns += 1;
            if !col.pass {
                bad += 1;
            }
            if col.case == 2 {
                tail_columns += 1;
                // Independent count: tail block b of p+1 holds p − b + 1 ones.
                let b = col.block - cfg.params.m * (cfg.params.k + 1);
                let want = (cfg.params.p - b + 1) as f64;
                if col.norm_sq != want {
                    inexact += 1;
                }
            }
        }
    }
    outcome(
        bad == 0 && inexact == 0 && columns > 0,
        format!("{columns} columns ({tail_columns} tail), {bad} over bound, {inexact} tail norms inexact, {skipped} configs too large"),
    )
}

fn c7_power(configs: &[Config]) -> Outcome {
    let mut tally = SweepTally::new();
    for cfg in configs {
        let c_a = c_of_a(cfg.p.a(), cfg.p.t_final(), 256).unwrap();
        let (e, _) = verify_power_bound(cfg.p.a(), &cfg.params, c_a).unwrap();
        tally.record(cfg, &e);
    }
    tally.outcome(String::new())
}

fn c8_decomposition(configs: &[Config]) -> Outcome {
    let mut tally = SweepTally::new();
    for cfg in configs {
        let d = error_decomposition(&cfg.p, &cfg.params).unwrap();
        tally.record(cfg, &d.i1);
        tally.record(cfg, &d.i2);
    }
    tally.outcome(String::new())
}

// ---------------------------------------------------------------- 9

fn c9_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_ts = 0.0f64;
    for _ in 0..40 {
        let n = rng.gen_range(1..=6);
        let h = rng.gen_range(0.05..1.0);
        let a = random_matrix(&mut rng, n);
        let ah = a.scale_real(h);
        let k = rng.gen_range(1..=15);
        let resid = t_k(&ah, k)
            .unwrap()
            .sub(&s_k(&ah, h, k).unwrap().mul(&a))
            .sub(&ComplexMatrix::identity(n));
        worst_ts = worst_ts.max(resid.max_abs());
    }

    let mut mats: Vec<ComplexMatrix> = (0..20).map(|i| random_matrix(&mut rng, 1 + i % 5)).collect();
    mats.push(ComplexMatrix::zeros(3, 3));
    mats.push("jordan_block:4:0".parse::<MatrixFamily>().unwrap().generate().unwrap());
    mats.push(ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 2.0, 4.0]).unwrap());
    let mut worst_int = 0.0f64;
    for a in &mats {
        let t = 0.7;
        let lhs = integral_expm(a, t).unwrap().mul(a).add(&ComplexMatrix::identity(a.rows()));
        let rhs = expm(&a.scale_real(t)).unwrap();
        worst_int = worst_int.max(lhs.sub(&rhs).max_abs() / rhs.max_abs().max(1.0));
    }

    let mut sum = 0.0;
    let mut term = 1.0f64;
    let mut partial_ok = true;
    for j in 0..=50u32 {
        if j > 0 {
            term /= f64::from(j * j);
        }
        sum += term;
        partial_ok &= sum < 2.28;
    }
    let constants = check_constants();
    let constants_ok = constants.iter().all(|c| c.passed());

    outcome(
        worst_ts <= 1e-12 && worst_int <= 1e-10 && partial_ok && constants_ok,
        format!(
            "T_k−S_kA−I {worst_ts:.1e}, integral identity {worst_int:.1e}, I0 partial max {sum:.6}, constants {}",
            constants.iter().map(|c| format!("{}={}", c.name, c.status.label())).collect::<Vec<_>>().join(" ")
        ),
    )
}

// ---------------------------------------------------------------- 10

fn c10_autonomisation() -> Outcome {
    let eps = 1e-6;
    let p = registry("cosine_drive").unwrap();
    let reference = certified_reference(&p).unwrap();
    let errs: Vec<f64> = [8, 16, 32]
        .iter()
        .map(|&n_s| {
            let g = SGrid::enclosing(n_s, p.t_final()).unwrap();
            let rep = solve_time_dependent(&p, eps, &g).unwrap();
            rep.x_final.sub(&reference.x).norm()
        })
        .collect();
    let final_ok = errs[2] <= 1e-3;
    let decay_ok = errs[2] <= errs[1] / 16.0;

    let fc = registry("frozen_const").unwrap();
    let g = SGrid::enclosing(16, fc.t_final()).unwrap();
    let dilated = solve_time_dependent(&fc, eps, &g).unwrap().x_final;
    let constant = OdeProblem::new(fc.a_at(0.0).unwrap(), fc.b_at(0.0).unwrap(), fc.x_in().clone(), fc.t_final()).unwrap();
    let params = select_parameters_for(&constant, eps, 1.0).unwrap();
    let direct = solve_bcow(&build_system(&constant, &params).unwrap(), SolveMethod::BlockForward)
        .unwrap()
        .x_final;
    let frozen = dilated.sub(&direct).norm();
    let frozen_ok = frozen <= 1e-5;

    outcome(
        final_ok && decay_ok && frozen_ok,
        format!(
            "cosine_drive err(8,16,32) = {:.3e}, {:.3e}, {:.3e} [≤1e-3: {final_ok}, err32 ≤ err16/16: {decay_ok}], \
             reference budget {:.1e}, frozen_const vs constant pipeline {frozen:.1e} [{frozen_ok}]",
            errs[0], errs[1], errs[2], reference.error_estimate
        ),
    )
}

// ---------------------------------------------------------------- 11

fn c11_dilation() -> Outcome {
    let (mut herm, mut eig, mut offdiag, mut mu_excess) = (0.0f64, 0.0f64, 0usize, 0.0f64);
    let p = registry("rotating_2x2").unwrap();
    for n_s in [4, 8, 16, 32] {
        for grid in [SGrid::unit(n_s, 1.0).unwrap(), SGrid::enclosing(n_s, 1.0).unwrap()] {
            let ps = build_momentum(&grid);
            herm = herm.max(ps.sub(&ps.adjoint()).max_abs());
            let ds = grid.spacing();
            for (l, &mu) in grid.mu().iter().enumerate() {
                let v: Vec<c64> = (0..n_s)
                    .map(|j| c64::from_polar(1.0 / (n_s as f64).sqrt(), mu * j as f64 * ds))
                    .collect();
                let v = ComplexVector::new(v).unwrap();
                let r = ps.mul_vec(&v).sub(&v.scale_real(mu)).norm();
                eig = eig.max(r);
                let _ = l;
            }
            let max_mu = grid.mu().iter().fold(0.0f64, |a, &m| a.max(m.abs()));
            mu_excess = mu_excess.max(max_mu - std::f64::consts::PI * n_s as f64 / 2.0);

            let dil = build_dilated(&p, &grid).unwrap();
            let a = dil.a_bar.to_dense();
            let sym = a.add(&a.adjoint());
            let bs = dil.block;
            for r in 0..dil.dim() {
                for c in 0..dil.dim() {
                    if r / bs != c / bs && sym[(r, c)] != c64::new(0.0, 0.0) {
                        offdiag += 1;
                    }
                }
            }
        }
    }
    outcome(
        herm <= 1e-12 && eig <= 1e-10 && offdiag == 0 && mu_excess <= 0.0,
        format!(
            "Hermitian defect {herm:.1e}, eigen residual {eig:.1e}, off-block entries of Ā+Ā† {offdiag}, \
             max|μ| − πN_s/2 = {mu_excess:.3}"
        ),
    )
}

// ---------------------------------------------------------------- 12

fn c12_determinism() -> Outcome {
    let text = r#"
mode = "sweep"
seed = 2024
[sweep]
target = "verify-bounds"
families = ["random_diagonalizable:3:10", "random_sparse:6:2", "jordan_block:3:-1"]
k = [5, 6]
forcing = "random"
"#;
    let cfg = parse_config(text).unwrap();
    let first = to_csv_string(&run(&cfg, 1).unwrap());
    let again = to_csv_string(&run(&cfg, 0).unwrap());
    let third = to_csv_string(&run(&cfg, 3).unwrap());
    let same = first == again && again == third;
    outcome(same, format!("{} rows, three runs identical: {same}", first.lines().count() - 1))
}

/// Number, name, runtime budget and check.
type Criterion<'a> = (usize, &'static str, Option<Duration>, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let started = Instant::now();
    let configs = sweep_configs();
    let criteria: Vec<Criterion> = vec![
        (1, "block structure", Some(Duration::from_secs(1)), Box::new(c1_structure)),
        (2, "oracle equivalence", Some(Duration::from_secs(30)), Box::new(c2_oracle_equivalence)),
        (3, "solution error", Some(Duration::from_secs(60)), Box::new(c3_solution_error)),
        (4, "norm bound", None, Box::new(|| c4_norm(&configs))),
        (5, "condition number bound", None, Box::new(|| c5_condition(&configs))),
        (6, "inverse columns", None, Box::new(|| c6_columns(&configs))),
        (7, "power bound", None, Box::new(|| c7_power(&configs))),
        (8, "error decomposition", None, Box::new(|| c8_decomposition(&configs))),
        (9, "algebraic identities", None, Box::new(c9_identities)),
        (10, "autonomisation", Some(Duration::from_secs(300)), Box::new(c10_autonomisation)),
        (11, "dilated operator", None, Box::new(c11_dilation)),
        (12, "determinism", None, Box::new(c12_determinism)),
    ];

    let mut unexpected = Vec::new();
    for (n, name, limit, f) in &criteria {
        let t0 = Instant::now();
        let mut o = f();
        let elapsed = t0.elapsed();
        if let Some(limit) = limit {
            if elapsed > *limit {
                o.pass = false;
                o.detail.push_str(&format!("; over the {}s budget", limit.as_secs()));
            }
        }
        let label = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {name}: {label} ({:.2}s) {}", elapsed.as_secs_f64(), o.detail);
        let known = KNOWN_RED.contains(n);
        if o.pass == known {
            unexpected.push(*n);
        }
    }
    println!("acceptance finished in {:.1}s", started.elapsed().as_secs_f64());
    if !unexpected.is_empty() {
        eprintln!("criteria with an unexpected result: {unexpected:?}");
        std::process::exit(1);
    }
}
