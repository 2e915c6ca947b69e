use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use bcow_core::bcow::SolveMethod;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Solve,
    VerifyBounds,
    Autonomize,
    Sweep,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Solve => "solve",
            Mode::VerifyBounds => "verify-bounds",
            Mode::Autonomize => "autonomize",
            Mode::Sweep => "sweep",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Forcing {
    #[default]
    None,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    #[default]
    Enclosing,
    Unit,
}

/// Where a constant-coefficient problem comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    /// JSON problem file with `a`, `b`, `x_in` and `t_final`.
    pub file: Option<PathBuf>,
    /// Matrix family; random families may omit the seed, which is then
    /// derived from the run seed and the cell index.
    pub family: Option<String>,
    #[serde(default = "one")]
    pub t_final: f64,
    #[serde(default)]
    pub forcing: Forcing,
    /// Fixed grid; when absent the parameters are selected from `epsilon`.
    pub m: Option<usize>,
    pub k: Option<usize>,
}

fn one() -> f64 {
    1.0
}

fn default_epsilon() -> f64 {
    0.1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutonomizeSpec {
    pub problem: String,
    #[serde(default = "default_ns")]
    pub n_s: Vec<usize>,
    #[serde(default)]
    pub grid: GridKind,
}

fn default_ns() -> Vec<usize> {
    vec![16]
}

/// Axes of a sweep; the cell list is their product in the listed order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Kind of cell: `solve`, `verify-bounds` or `autonomize`.
    pub target: Option<Mode>,
    #[serde(default)]
    pub families: Vec<String>,
    #[serde(default)]
    pub t_final: Vec<f64>,
    #[serde(default)]
    pub m: Vec<usize>,
    #[serde(default)]
    pub k: Vec<usize>,
    #[serde(default)]
    pub problems: Vec<String>,
    #[serde(default)]
    pub n_s: Vec<usize>,
    #[serde(default)]
    pub forcing: Forcing,
    #[serde(default)]
    pub grid: GridKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_c_samples")]
    pub c_samples: usize,
    #[serde(default = "default_dense_cap")]
    pub dense_cap: usize,
    #[serde(default = "default_column_cap")]
    pub column_cap: usize,
}

fn default_c_samples() -> usize {
    bcow_core::bounds::DEFAULT_C_SAMPLES
}

fn default_dense_cap() -> usize {
    bcow_core::bounds::DENSE_CAP
}

fn default_column_cap() -> usize {
    2048
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            c_samples: default_c_samples(),
            dense_cap: default_dense_cap(),
            column_cap: default_column_cap(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_method")]
    pub method: String,
    pub out: Option<PathBuf>,
    pub problem: Option<ProblemSpec>,
    pub autonomize: Option<AutonomizeSpec>,
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn default_method() -> String {
    "block_forward".into()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn invalid(field: &str, why: impl fmt::Display) -> ConfigError {
    ConfigError(format!("invalid `{field}`: {why}"))
}

/// One unit of work.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Solve {
        problem: ProblemSpec,
    },
    Bounds {
        family: String,
        t_final: f64,
        m: Option<usize>,
        k: usize,
        forcing: Forcing,
    },
    Autonomize {
        problem: String,
        n_s: usize,
        grid: GridKind,
    },
}

impl Cell {
    pub fn mode(&self) -> Mode {
        match self {
            Cell::Solve { .. } => Mode::Solve,
            Cell::Bounds { .. } => Mode::VerifyBounds,
            Cell::Autonomize { .. } => Mode::Autonomize,
        }
    }
}

/// Default `k` for bound cells when the sweep lists none.
pub const DEFAULT_BOUNDS_K: usize = 8;

impl ExperimentConfig {
    pub fn minimal(mode: Mode) -> Self {
        Self {
            mode,
            seed: 0,
            epsilon: default_epsilon(),
            method: default_method(),
            out: None,
            problem: None,
            autonomize: None,
            sweep: None,
            tolerances: Tolerances::default(),
        }
    }

    pub fn method(&self) -> Result<SolveMethod, ConfigError> {
        SolveMethod::from_str(&self.method).map_err(|e| invalid("method", e))
    }

    /// Kind of cell this config produces.
    pub fn cell_mode(&self) -> Mode {
        match self.mode {
            Mode::Sweep => self
                .sweep
                .as_ref()
                .and_then(|s| s.target)
                .unwrap_or(Mode::VerifyBounds),
            m => m,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(invalid("epsilon", format!("{} is outside (0, 1/2)", self.epsilon)));
        }
        self.method()?;
        let t = self.tolerances;
        if t.c_samples < 2 {
            return Err(invalid("tolerances.c_samples", "must be >= 2"));
        }
        if let Some(p) = &self.problem {
            if p.file.is_some() == p.family.is_some() {
                return Err(invalid("problem", "give exactly one of `file` or `family`"));
            }
            if !p.t_final.is_finite() || p.t_final <= 0.0 {
                return Err(invalid("problem.t_final", "must be positive"));
            }
        }
        match self.mode {
            Mode::Solve if self.problem.is_none() => Err(invalid("problem", "required in solve mode")),
            Mode::VerifyBounds if self.problem.as_ref().and_then(|p| p.family.as_ref()).is_none() => {
                Err(invalid("problem.family", "required in verify-bounds mode"))
            }
            Mode::Autonomize if self.autonomize.is_none() => {
                Err(invalid("autonomize", "required in autonomize mode"))
            }
            Mode::Sweep => {
                let s = self.sweep.as_ref().ok_or_else(|| invalid("sweep", "required in sweep mode"))?;
                match self.cell_mode() {
                    Mode::VerifyBounds if s.families.is_empty() => {
                        Err(invalid("sweep.families", "must not be empty"))
                    }
                    Mode::Solve if s.families.is_empty() => Err(invalid("sweep.families", "must not be empty")),
                    Mode::Autonomize if s.problems.is_empty() || s.n_s.is_empty() => {
                        Err(invalid("sweep", "autonomize sweeps need `problems` and `n_s`"))
                    }
                    Mode::Sweep => Err(invalid("sweep.target", "cannot be `sweep`")),
                    _ => Ok(()),
                }
            }
            _ => Ok(()),
        }
    }

    /// Cells in execution and output order.
    pub fn cells(&self) -> Vec<Cell> {
        match self.mode {
            Mode::Solve => vec![Cell::Solve {
                problem: self.problem.clone().expect("validated"),
            }],
            Mode::VerifyBounds => {
                let p = self.problem.as_ref().expect("validated");
                vec![Cell::Bounds {
                    family: p.family.clone().expect("validated"),
                    t_final: p.t_final,
                    m: p.m,
                    k: p.k.unwrap_or(DEFAULT_BOUNDS_K),
                    forcing: p.forcing,
                }]
            }
            Mode::Autonomize => {
                let a = self.autonomize.as_ref().expect("validated");
                a.n_s
                    .iter()
                    .map(|&n_s| Cell::Autonomize {
                        problem: a.problem.clone(),
                        n_s,
                        grid: a.grid,
                    })
                    .collect()
            }
            Mode::Sweep => self.sweep_cells(),
        }
    }

    fn sweep_cells(&self) -> Vec<Cell> {
        let s = self.sweep.as_ref().expect("validated");
        let ts = if s.t_final.is_empty() { vec![1.0] } else { s.t_final.clone() };
        let ms: Vec<Option<usize>> = if s.m.is_empty() { vec![None] } else { s.m.iter().map(|&m| Some(m)).collect() };
        let mut out = Vec::new();
        match self.cell_mode() {
            Mode::Autonomize => {
                for p in &s.problems {
                    for &n_s in &s.n_s {
                        out.push(Cell::Autonomize {
                            problem: p.clone(),
                            n_s,
                            grid: s.grid,
                        });
                    }
                }
            }
            Mode::Solve => {
                let ks: Vec<Option<usize>> =
                    if s.k.is_empty() { vec![None] } else { s.k.iter().map(|&k| Some(k)).collect() };
                for f in &s.families {
                    for &t in &ts {
                        for &m in &ms {
                            for &k in &ks {
                                out.push(Cell::Solve {
                                    problem: ProblemSpec {
                                        file: None,
                                        family: Some(f.clone()),
                                        t_final: t,
                                        forcing: s.forcing,
                                        m,
                                        k,
                                    },
                                });
                            }
                        }
                    }
                }
            }
            _ => {
                let ks = if s.k.is_empty() { vec![DEFAULT_BOUNDS_K] } else { s.k.clone() };
                for f in &s.families {
                    for &t in &ts {
                        for &m in &ms {
                            for &k in &ks {
                                out.push(Cell::Bounds {
                                    family: f.clone(),
                                    t_final: t,
                                    m,
                                    k,
                                    forcing: s.forcing,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Strict TOML parse followed by validation.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Axis list in command-line form: `k=5..10;m=1,2;t=1,2.5`.
pub fn parse_axes(spec: &str) -> Result<SweepSpec, ConfigError> {
    let mut s = SweepSpec::default();
    for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, values) = part
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("axis `{part}` needs the form name=values")))?;
        let name = name.trim();
        match name {
            "k" => s.k = int_list(name, values)?,
            "m" => s.m = int_list(name, values)?,
            "n_s" | "Ns" => s.n_s = int_list(name, values)?,
            "t" | "t_final" => {
                s.t_final = values
                    .split(',')
                    .map(|v| v.trim().parse::<f64>().map_err(|_| invalid(name, v)))
                    .collect::<Result<_, _>>()?
            }
            other => return Err(ConfigError(format!("unknown sweep axis `{other}`"))),
        }
    }
    Ok(s)
}

fn int_list(name: &str, values: &str) -> Result<Vec<usize>, ConfigError> {
    let mut out = Vec::new();
    for v in values.split(',').map(str::trim) {
        if let Some((lo, hi)) = v.split_once("..") {
            let lo: usize = lo.trim().parse().map_err(|_| invalid(name, v))?;
            let hi: usize = hi.trim().parse().map_err(|_| invalid(name, v))?;
            if lo > hi {
                return Err(invalid(name, format!("empty range {v}")));
            }
            out.extend(lo..=hi);
        } else {
            out.push(v.parse().map_err(|_| invalid(name, v))?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_solve_gets_default_epsilon() {
        let cfg = parse_config(
            r#"
mode = "solve"
[problem]
family = "jordan_block:2:-1"
"#,
        )
        .unwrap();
        assert_eq!(cfg.epsilon, 0.1);
        assert_eq!(cfg.method().unwrap(), SolveMethod::BlockForward);
        assert_eq!(cfg.cells().len(), 1);
    }

    #[test]
    fn sweep_over_k_enumerates_in_order() {
        let cfg = parse_config(
            r#"
mode = "sweep"
seed = 9
[sweep]
target = "verify-bounds"
families = ["diagonal:-1,-2"]
k = [5, 6, 7, 8, 9, 10]
"#,
        )
        .unwrap();
        let ks: Vec<usize> = cfg
            .cells()
            .into_iter()
            .map(|c| match c {
                Cell::Bounds { k, .. } => k,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(ks, vec![5, 6, 7, 8, 9, 10]);
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let err = parse_config("mode = \"solve\"\nepsilom = 0.2\n").unwrap_err();
        assert!(err.0.contains("epsilom"), "{err}");
        let err = parse_config(
            "mode = \"solve\"\n[problem]\nfamily = \"diagonal:1\"\nsize = 3\n",
        )
        .unwrap_err();
        assert!(err.0.contains("size"), "{err}");
    }

    #[test]
    fn validation_names_fields() {
        let err = parse_config("mode = \"solve\"\nepsilon = 0.7\n[problem]\nfamily = \"diagonal:1\"\n").unwrap_err();
        assert!(err.0.contains("epsilon"));
        let err = parse_config("mode = \"sweep\"\n[sweep]\nfamilies = []\n").unwrap_err();
        assert!(err.0.contains("sweep.families"));
        let err = parse_config("mode = \"solve\"\n").unwrap_err();
        assert!(err.0.contains("problem"));
    }

    #[test]
    fn axis_specs() {
        let s = parse_axes("k=5..7; m=1,4; t=0.5,2").unwrap();
        assert_eq!(s.k, vec![5, 6, 7]);
        assert_eq!(s.m, vec![1, 4]);
        assert_eq!(s.t_final, vec![0.5, 2.0]);
        assert!(parse_axes("q=1").is_err());
        assert!(parse_axes("k=7..5").is_err());
    }
}
