//! Command-line front end.
//!
//! Exit codes: 0 success or certified, 1 certificate failure or not
//! certified, 2 solver failure, 3 input error. Reports go to stdout as one
//! JSON object per line; files go to `--out`.

mod convergence;
mod settings;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::adaptivity::{adaptive_certify, AdaptiveStatus};
use crate::certificate::certify;
use crate::error::{Error, Result};
use crate::fem::{read_csv, write_csv, write_vtk, FeField};
use crate::geometry::{check_regularity, read_mesh, write_mesh, Mesh, MeshTopology};
use crate::models::{builtin_model, builtin_problem, counterexample_1d, counterexample_2d};
use crate::solver::{multi_start, picard_solve, MultiStartOptions};

pub use convergence::{convergence_study, rates_within, ConvergenceRow};
pub use settings::{parse_strategy, RateBands, RunConfig, DEFAULT_SEED, RUN_KEYS};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NOT_CERTIFIED: u8 = 1;
pub const EXIT_SOLVER: u8 = 2;
pub const EXIT_INPUT: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "uniqfem", version, about = "Quasilinear P1 solver with local uniqueness certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads for assembly and multi-start (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Log verbosity; repeat for more.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a problem and write the field and the solve report.
    Solve(RunArgs),
    /// Check a stored field against the uniqueness conditions.
    Certify(CertifyArgs),
    /// Solve, certify and refine failing elements until certified.
    Adapt(AdaptArgs),
    /// Threshold arithmetic of the known nonuniqueness constructions.
    Counterexample(CounterexampleArgs),
    /// Uniform-refinement convergence study against an exact solution.
    Convergence(ConvergenceArgs),
    /// Size and shape statistics of a mesh.
    MeshInfo(MeshInfoArgs),
}

#[derive(Debug, Args, Clone)]
pub struct RunArgs {
    /// key = value problem and solver settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Builtin problem id (overrides the config).
    #[arg(long)]
    pub problem: Option<String>,
    /// Mesh file replacing the problem's mesh.
    #[arg(long)]
    pub mesh: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Picard iteration limit.
    #[arg(long)]
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Nodal field CSV as written by `solve`.
    #[arg(long)]
    pub field: PathBuf,
    /// Coefficient model supplying k_alpha and L0 (defaults to the problem's).
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub k_alpha: Option<f64>,
    #[arg(long)]
    pub lipschitz: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AdaptArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Maximum solve/certify rounds.
    #[arg(long)]
    pub rounds: Option<usize>,
    /// Element budget.
    #[arg(long)]
    pub budget: Option<usize>,
    /// `all` or `worst:<theta>`.
    #[arg(long)]
    pub strategy: Option<String>,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    #[arg(long)]
    pub k: f64,
    #[arg(long, default_value_t = 1.0)]
    pub u1: f64,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, default_value_t = 4)]
    pub rounds: usize,
}

#[derive(Debug, Args)]
pub struct MeshInfoArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Smallest admissible angle (radians) for the regularity report.
    #[arg(long, default_value_t = 0.0)]
    pub t_min: f64,
}

/// Parse `args` and run; returns the process exit code.
pub fn run_from<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not configure {n} threads: {e}");
        }
    }
    run(cli.command)
}

pub fn main() -> ExitCode {
    ExitCode::from(run_from(std::env::args_os()))
}

pub fn run(command: Command) -> u8 {
    let result = match command {
        Command::Solve(a) => cmd_solve(&a),
        Command::Certify(a) => cmd_certify(&a),
        Command::Adapt(a) => cmd_adapt(&a),
        Command::Counterexample(a) => cmd_counterexample(&a),
        Command::Convergence(a) => cmd_convergence(&a),
        Command::MeshInfo(a) => cmd_mesh_info(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

pub fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::NonlinearSolveFailure(_)
        | Error::LinearSolveFailure { .. }
        | Error::CoefficientBoundsViolation { .. } => EXIT_SOLVER,
        _ => EXIT_INPUT,
    }
}

fn emit<T: Serialize>(value: &T) -> Result<()> {
    let line = serde_json::to_string(value).map_err(std::io::Error::from)?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}")?;
    Ok(())
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    std::fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn absolute(p: &Path) -> Result<PathBuf> {
    Ok(if p.is_relative() { std::env::current_dir()?.join(p) } else { p.to_path_buf() })
}

fn open_existing(p: &Path) -> Result<BufReader<File>> {
    File::open(p).map(BufReader::new).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", p.display())))
    })
}

/// Merge the config file with command-line overrides.
pub fn load_config(a: &RunArgs) -> Result<RunConfig> {
    let mut cfg = match &a.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(p) = &a.problem {
        cfg.problem.problem = Some(p.clone());
    }
    if let Some(m) = &a.mesh {
        if !m.exists() {
            return Err(Error::Io(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                format!("{}: mesh file not found", m.display()),
            )));
        }
        cfg.problem.mesh = Some(absolute(m)?.to_string_lossy().into_owned());
    }
    if let Some(o) = &a.out {
        cfg.out = o.clone();
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(n) = a.max_iterations {
        cfg.solver.max_iterations = n;
    }
    Ok(cfg)
}

fn write_field(dir: &Path, u: &FeField) -> Result<()> {
    write_csv(u, create(dir, "solution.csv")?)?;
    write_vtk(u, create(dir, "solution.vtk")?)?;
    Ok(())
}

#[derive(Serialize)]
struct SolveSummary<'a> {
    command: &'static str,
    problem: &'a str,
    dim: usize,
    n_vertices: usize,
    n_elements: usize,
    converged: bool,
    iterations: usize,
    final_change: Option<f64>,
    final_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    clusters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failed_starts: Option<usize>,
}

pub fn cmd_solve(a: &RunArgs) -> Result<u8> {
    let cfg = load_config(a)?;
    let problem = cfg.build_problem()?;
    let mesh = problem.mesh.clone();
    let mut summary = SolveSummary {
        command: "solve",
        problem: &problem.name,
        dim: mesh.dim(),
        n_vertices: mesh.n_vertices(),
        n_elements: mesh.n_elements(),
        converged: false,
        iterations: 0,
        final_change: None,
        final_residual: None,
        clusters: None,
        failed_starts: None,
    };

    let (u, report) = if cfg.starts > 1 {
        let opts = MultiStartOptions {
            n_starts: cfg.starts,
            seed: cfg.seed,
            ..Default::default()
        };
        let probe = match multi_start(&problem, &cfg.solver, &opts) {
            Ok(p) => p,
            Err(Error::NonlinearSolveFailure(f)) => {
                summary.iterations = f.report.iterations;
                summary.final_change = f.report.changes.last().copied();
                emit(&summary)?;
                return Ok(EXIT_SOLVER);
            }
            Err(e) => return Err(e),
        };
        summary.clusters = Some(probe.clusters.len());
        summary.failed_starts = Some(probe.failures);
        let first = probe.clusters[0].members[0];
        let report = probe.reports[first].clone().expect("converged start has a report");
        (probe.clusters[0].representative.clone(), report)
    } else {
        match picard_solve(&problem, &cfg.solver, None) {
            Ok(ok) => ok,
            Err(Error::NonlinearSolveFailure(f)) => {
                summary.iterations = f.report.iterations;
                summary.final_change = f.report.changes.last().copied();
                summary.final_residual = f.report.final_residual.map(|r| r.residual);
                write_field(&cfg.out, &f.last_iterate)?;
                emit(&summary)?;
                return Ok(EXIT_SOLVER);
            }
            Err(e) => return Err(e),
        }
    };
    summary.converged = report.converged;
    summary.iterations = report.iterations;
    summary.final_change = report.changes.last().copied();
    summary.final_residual = report.final_residual.map(|r| r.residual);
    write_field(&cfg.out, &u)?;
    let mut w = create(&cfg.out, "report.json")?;
    serde_json::to_writer_pretty(&mut w, &report).map_err(std::io::Error::from)?;
    writeln!(w)?;
    emit(&summary)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CertifySummary {
    command: &'static str,
    pass: bool,
    n_elements: usize,
    n_failing: usize,
    n_inapplicable: usize,
    max_variation: f64,
    min_margin: f64,
    k_alpha: f64,
    lipschitz: f64,
}

pub fn cmd_certify(a: &CertifyArgs) -> Result<u8> {
    let cfg = load_config(&a.run)?;
    let problem = cfg.build_problem()?;
    let mesh = problem.mesh.clone();
    let u = read_csv(open_existing(&a.field)?, mesh)?;
    let model = match &a.model {
        Some(id) => builtin_model(id)?,
        None => problem.model.clone(),
    };
    let k_alpha = a.k_alpha.unwrap_or(model.k_alpha());
    let lipschitz = a.lipschitz.unwrap_or(model.lipschitz());
    let cert = certify(&u, k_alpha, lipschitz)?;
    cert.write_csv(create(&cfg.out, "certificate.csv")?)?;
    emit(&CertifySummary {
        command: "certify",
        pass: cert.pass,
        n_elements: cert.elements.len(),
        n_failing: cert.n_failing,
        n_inapplicable: cert.n_inapplicable,
        max_variation: cert.max_variation(),
        min_margin: cert.min_margin(),
        k_alpha,
        lipschitz,
    })?;
    Ok(if cert.pass { EXIT_OK } else { EXIT_NOT_CERTIFIED })
}

#[derive(Serialize)]
struct AdaptSummary<'a> {
    command: &'static str,
    status: &'a AdaptiveStatus,
    rounds: usize,
    initial_elements: usize,
    final_elements: usize,
    refined_roots: usize,
    refined_fraction: f64,
}

pub fn cmd_adapt(a: &AdaptArgs) -> Result<u8> {
    let mut cfg = load_config(&a.run)?;
    if let Some(r) = a.rounds {
        cfg.adaptive.max_rounds = r;
    }
    if let Some(b) = a.budget {
        cfg.adaptive.element_budget = b;
    }
    if let Some(s) = &a.strategy {
        cfg.adaptive.strategy = parse_strategy(s).ok_or_else(|| {
            Error::InvalidOptions(format!("strategy must be `all` or `worst:<theta>`, got `{s}`"))
        })?;
    }
    let problem = cfg.build_problem()?;
    let sol = adaptive_certify(&problem, &cfg.adaptive_options())?;

    let mut hist = create(&cfg.out, "history.jsonl")?;
    for rec in &sol.history {
        let line = serde_json::to_string(rec).map_err(std::io::Error::from)?;
        writeln!(hist, "{line}")?;
        emit(rec)?;
    }
    hist.flush()?;
    write_mesh(sol.field.mesh(), create(&cfg.out, "mesh.txt")?)?;
    write_field(&cfg.out, &sol.field)?;
    if let Some(c) = &sol.certificate {
        c.write_csv(create(&cfg.out, "certificate.csv")?)?;
    }
    emit(&AdaptSummary {
        command: "adapt",
        status: &sol.status,
        rounds: sol.history.len(),
        initial_elements: sol.initial_elements,
        final_elements: sol.field.mesh().n_elements(),
        refined_roots: sol.refined_roots.len(),
        refined_fraction: sol.refined_fraction(),
    })?;
    Ok(match sol.status {
        AdaptiveStatus::Certified => EXIT_OK,
        AdaptiveStatus::SolveFailed => EXIT_SOLVER,
        _ => EXIT_NOT_CERTIFIED,
    })
}

pub fn cmd_counterexample(a: &CounterexampleArgs) -> Result<u8> {
    let analysis = match a.dim {
        1 => counterexample_1d(a.k, a.u1)?,
        2 => counterexample_2d(a.k, a.u1)?,
        d => return Err(Error::InvalidOptions(format!("dim must be 1 or 2, got {d}"))),
    };
    emit(&analysis)?;
    Ok(if analysis.violated { EXIT_NOT_CERTIFIED } else { EXIT_OK })
}

pub fn cmd_convergence(a: &ConvergenceArgs) -> Result<u8> {
    let cfg = load_config(&a.run)?;
    if a.rounds < 2 {
        return Err(Error::InvalidOptions(format!(
            "--rounds must be at least 2 to estimate rates, got {}",
            a.rounds
        )));
    }
    let problem = cfg.build_problem()?;
    let rows = convergence_study(&problem, a.rounds, &cfg.solver)?;
    for r in &rows {
        emit(r)?;
    }
    let ok = rates_within(&rows, cfg.bands.l2, cfg.bands.h1);
    #[derive(Serialize)]
    struct Summary {
        command: &'static str,
        within_bands: bool,
        l2_band: (f64, f64),
        h1_band: (f64, f64),
    }
    emit(&Summary {
        command: "convergence",
        within_bands: ok,
        l2_band: cfg.bands.l2,
        h1_band: cfg.bands.h1,
    })?;
    Ok(if ok { EXIT_OK } else { EXIT_NOT_CERTIFIED })
}

#[derive(Serialize)]
struct MeshInfo {
    command: &'static str,
    dim: usize,
    n_vertices: usize,
    n_elements: usize,
    n_dirichlet: usize,
    h_max: f64,
    h_min: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_angle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_angle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    non_regular: Option<usize>,
}

pub fn cmd_mesh_info(a: &MeshInfoArgs) -> Result<u8> {
    let mesh: Mesh = match (&a.run.mesh, &a.run.config, &a.run.problem) {
        (Some(p), _, _) => read_mesh(open_existing(p)?)?,
        (None, None, Some(id)) => (*builtin_problem(id)?.mesh).clone(),
        _ => (*load_config(&a.run)?.build_problem()?.mesh).clone(),
    };
    let n = mesh.n_elements();
    let h_min = (0..n).map(|e| mesh.element_diameter(e)).fold(f64::INFINITY, f64::min);
    let mut info = MeshInfo {
        command: "mesh-info",
        dim: mesh.dim(),
        n_vertices: mesh.n_vertices(),
        n_elements: n,
        n_dirichlet: mesh.dirichlet_vertices().len(),
        h_max: mesh.max_diameter(),
        h_min,
        min_angle: None,
        max_angle: None,
        c_min: None,
        gamma_min: None,
        non_regular: None,
    };
    if let Mesh::Triangle(m) = &mesh {
        let r = check_regularity(m, a.t_min);
        info.min_angle = Some(r.min_angle);
        info.max_angle = Some(r.max_angle);
        info.c_min = Some(r.c_min);
        info.gamma_min = Some((0..n).map(|e| m.quality(e).gamma).fold(f64::INFINITY, f64::min));
        info.non_regular = Some(r.violations.len());
    }
    emit(&info)?;
    Ok(EXIT_OK)
}
