use std::path::{Path, PathBuf};

use crate::adaptivity::{AdaptiveOptions, MarkingStrategy};
use crate::error::{Error, Result};
use crate::models::{parse_key_values, KeyValue, ProblemConfig, ProblemSpec};
use crate::solver::SolverOptions;

pub const DEFAULT_SEED: u64 = 2024;

/// Accepted rate windows of the convergence study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBands {
    pub l2: (f64, f64),
    pub h1: (f64, f64),
}

impl Default for RateBands {
    fn default() -> Self {
        Self {
            l2: (1.8, 2.2),
            h1: (0.8, 1.2),
        }
    }
}

/// Everything a subcommand needs besides its own flags: the problem, the
/// solver and adaptive options, and where to write.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: ProblemConfig,
    /// Directory that relative paths in the config file are resolved against.
    pub base_dir: Option<PathBuf>,
    pub solver: SolverOptions,
    pub adaptive: AdaptiveOptions,
    /// Number of Picard starts in `solve`; more than one runs the multi-start probe.
    pub starts: usize,
    pub seed: u64,
    pub bands: RateBands,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            problem: ProblemConfig::default(),
            base_dir: None,
            solver: SolverOptions::default(),
            adaptive: AdaptiveOptions::default(),
            starts: 1,
            seed: DEFAULT_SEED,
            bands: RateBands::default(),
            out: PathBuf::from("out"),
        }
    }
}

/// Keys understood besides the problem keys.
pub const RUN_KEYS: &[&str] = &[
    "linear_tol",
    "linear_max_iter",
    "nonlinear_tol",
    "max_iterations",
    "damping",
    "min_damping",
    "max_rounds",
    "strategy",
    "budget",
    "starts",
    "seed",
    "l2_band",
    "h1_band",
];

fn parse_err(kv: &KeyValue, what: &str) -> Error {
    Error::Parse {
        line: kv.line,
        message: format!("`{}` must be {what}, got `{}`", kv.key, kv.value),
    }
}

fn num<T: std::str::FromStr>(kv: &KeyValue, what: &str) -> Result<T> {
    kv.value.parse().map_err(|_| parse_err(kv, what))
}

fn band(kv: &KeyValue) -> Result<(f64, f64)> {
    let (a, b) = kv
        .value
        .split_once(',')
        .ok_or_else(|| parse_err(kv, "`lo,hi`"))?;
    let lo: f64 = a.trim().parse().map_err(|_| parse_err(kv, "`lo,hi`"))?;
    let hi: f64 = b.trim().parse().map_err(|_| parse_err(kv, "`lo,hi`"))?;
    if !(lo <= hi) {
        return Err(parse_err(kv, "`lo,hi` with lo <= hi"));
    }
    Ok((lo, hi))
}

/// `all` or `worst:<theta>`.
pub fn parse_strategy(s: &str) -> Option<MarkingStrategy> {
    match s.trim() {
        "all" => Some(MarkingStrategy::AllViolating),
        other => {
            let theta: f64 = other.strip_prefix("worst:")?.trim().parse().ok()?;
            (theta > 0.0 && theta <= 1.0).then_some(MarkingStrategy::WorstFraction(theta))
        }
    }
}

impl RunConfig {
    /// Parse config text. Unknown keys are an error.
    pub fn parse(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let mut entries = parse_key_values(text)?;
        let mut cfg = RunConfig {
            problem: ProblemConfig::extract(&mut entries)?,
            base_dir: base_dir.map(Path::to_path_buf),
            ..Default::default()
        };
        for kv in &entries {
            match kv.key.as_str() {
                "linear_tol" => cfg.solver.linear_tol = num(kv, "a number")?,
                "linear_max_iter" => cfg.solver.linear_max_iter = num(kv, "an integer")?,
                "nonlinear_tol" => cfg.solver.nonlinear_tol = num(kv, "a number")?,
                "max_iterations" => cfg.solver.max_iterations = num(kv, "an integer")?,
                "damping" => cfg.solver.damping = num(kv, "a number")?,
                "min_damping" => cfg.solver.min_damping = num(kv, "a number")?,
                "max_rounds" => cfg.adaptive.max_rounds = num(kv, "an integer")?,
                "strategy" => {
                    cfg.adaptive.strategy = parse_strategy(&kv.value)
                        .ok_or_else(|| parse_err(kv, "`all` or `worst:<theta>` with theta in (0, 1]"))?
                }
                "budget" => cfg.adaptive.element_budget = num(kv, "an integer")?,
                "starts" => cfg.starts = num(kv, "an integer")?,
                "seed" => cfg.seed = num(kv, "an integer")?,
                "l2_band" => cfg.bands.l2 = band(kv)?,
                "h1_band" => cfg.bands.h1 = band(kv)?,
                _ => {
                    return Err(Error::Parse {
                        line: kv.line,
                        message: format!("unknown key `{}`", kv.key),
                    })
                }
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
        })?;
        Self::parse(&text, path.parent())
    }

    pub fn build_problem(&self) -> Result<ProblemSpec> {
        self.problem.build(self.base_dir.as_deref())
    }

    /// Solver options as the adaptive loop sees them.
    pub fn adaptive_options(&self) -> AdaptiveOptions {
        AdaptiveOptions {
            solver: self.solver,
            ..self.adaptive
        }
    }
}
