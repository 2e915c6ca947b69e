use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use crate::config::{
    parse_axes, parse_config, AutonomizeSpec, ExperimentConfig, Forcing, GridKind, Mode, ProblemSpec, SweepSpec,
};

/// Default output directory when `--out` is absent.
pub const OUT_DIR_ENV: &str = "BCOW_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "bcow", version, about = "Truncated-Taylor linear ODE solver and bound checks")]
pub struct Cli {
    /// TOML experiment file; flags given alongside override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// CSV destination. Defaults to `$BCOW_OUT_DIR/<mode>.csv`, else stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one constant-coefficient problem.
    Solve(SolveArgs),
    /// Check the norm, conditioning and error bounds on a matrix family.
    VerifyBounds(BoundsArgs),
    /// Solve a time-dependent problem through the dilated system.
    Autonomize(AutonomizeArgs),
    /// Run the sweep described by `--config`.
    Sweep,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// JSON problem file.
    #[arg(long, conflicts_with = "family")]
    pub problem: Option<PathBuf>,
    /// Matrix family spec, e.g. `jordan_block:4:-1`.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// `block_forward` or `generic`.
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub t_final: Option<f64>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum)]
    pub forcing: Option<ForcingArg>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub family: Option<String>,
    /// Axes such as `k=5..8;m=1,2;t=0.5,1`.
    #[arg(long)]
    pub sweep: Option<String>,
    #[arg(long)]
    pub t_final: Option<f64>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum)]
    pub forcing: Option<ForcingArg>,
}

#[derive(Debug, Args)]
pub struct AutonomizeArgs {
    /// Registry name, e.g. `cosine_drive`.
    #[arg(long)]
    pub problem: Option<String>,
    #[arg(long = "Ns")]
    pub n_s: Option<usize>,
    /// Comma-separated list of `N_s` values.
    #[arg(long = "sweep-Ns", value_delimiter = ',')]
    pub sweep_n_s: Vec<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, value_enum)]
    pub grid: Option<GridArg>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum ForcingArg {
    None,
    Random,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum GridArg {
    Enclosing,
    Unit,
}

impl From<ForcingArg> for Forcing {
    fn from(f: ForcingArg) -> Self {
        match f {
            ForcingArg::None => Forcing::None,
            ForcingArg::Random => Forcing::Random,
        }
    }
}

impl From<GridArg> for GridKind {
    fn from(g: GridArg) -> Self {
        match g {
            GridArg::Enclosing => GridKind::Enclosing,
            GridArg::Unit => GridKind::Unit,
        }
    }
}

fn family_spec(base: Option<ProblemSpec>) -> ProblemSpec {
    base.unwrap_or(ProblemSpec {
        file: None,
        family: None,
        t_final: 1.0,
        forcing: Forcing::None,
        m: None,
        k: None,
    })
}

impl Cli {
    /// Merges the config file (if any) with the flags.
    pub fn experiment(&self) -> anyhow::Result<ExperimentConfig> {
        let mode = match &self.command {
            Command::Solve(_) => Mode::Solve,
            Command::VerifyBounds(_) => Mode::VerifyBounds,
            Command::Autonomize(_) => Mode::Autonomize,
            Command::Sweep => Mode::Sweep,
        };
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let cfg = parse_config(&text).with_context(|| format!("in {}", path.display()))?;
                if cfg.mode != mode && mode != Mode::Sweep {
                    bail!("config is for `{}` but the subcommand is `{mode}`", cfg.mode);
                }
                cfg
            }
            None if mode == Mode::Sweep => bail!("`sweep` needs --config"),
            None => ExperimentConfig::minimal(mode),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(out) = &self.out {
            cfg.out = Some(out.clone());
        }
        match &self.command {
            Command::Solve(a) => {
                let mut p = family_spec(cfg.problem.take());
                if let Some(f) = &a.problem {
                    p.file = Some(f.clone());
                    p.family = None;
                }
                if let Some(f) = &a.family {
                    p.family = Some(f.clone());
                    p.file = None;
                }
                p.t_final = a.t_final.unwrap_or(p.t_final);
                p.m = a.m.or(p.m);
                p.k = a.k.or(p.k);
                if let Some(f) = a.forcing {
                    p.forcing = f.into();
                }
                cfg.problem = Some(p);
                if let Some(e) = a.epsilon {
                    cfg.epsilon = e;
                }
                if let Some(m) = &a.method {
                    cfg.method = m.clone();
                }
            }
            Command::VerifyBounds(a) => {
                let mut p = family_spec(cfg.problem.take());
                if let Some(f) = &a.family {
                    p.family = Some(f.clone());
                }
                p.t_final = a.t_final.unwrap_or(p.t_final);
                p.m = a.m.or(p.m);
                p.k = a.k.or(p.k);
                if let Some(f) = a.forcing {
                    p.forcing = f.into();
                }
                if let Some(axes) = &a.sweep {
                    let family = p.family.clone().context("--sweep needs --family")?;
                    let mut s: SweepSpec = parse_axes(axes)?;
                    s.target = Some(Mode::VerifyBounds);
                    s.families = vec![family];
                    s.forcing = p.forcing;
                    if s.t_final.is_empty() {
                        s.t_final = vec![p.t_final];
                    }
                    if s.m.is_empty() {
                        s.m = p.m.into_iter().collect();
                    }
                    if s.k.is_empty() {
                        s.k = p.k.into_iter().collect();
                    }
                    cfg.mode = Mode::Sweep;
                    cfg.sweep = Some(s);
                }
                cfg.problem = Some(p);
            }
            Command::Autonomize(a) => {
                let mut s = cfg.autonomize.take().unwrap_or(AutonomizeSpec {
                    problem: String::new(),
                    n_s: vec![16],
                    grid: GridKind::Enclosing,
                });
                if let Some(p) = &a.problem {
                    s.problem = p.clone();
                }
                if !a.sweep_n_s.is_empty() {
                    s.n_s = a.sweep_n_s.clone();
                } else if let Some(n) = a.n_s {
                    s.n_s = vec![n];
                }
                if let Some(g) = a.grid {
                    s.grid = g.into();
                }
                if s.problem.is_empty() {
                    bail!("autonomize needs --problem");
                }
                cfg.autonomize = Some(s);
                if let Some(e) = a.epsilon {
                    cfg.epsilon = e;
                }
            }
            Command::Sweep => {}
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Where the CSV goes: explicit path, else the environment directory, else
/// stdout (`None`).
pub fn output_path(cfg: &ExperimentConfig, env_dir: Option<&str>) -> Option<PathBuf> {
    cfg.out
        .clone()
        .or_else(|| env_dir.map(|d| PathBuf::from(d).join(format!("{}.csv", cfg.mode))))
}
