use thiserror::Error;

use crate::fem::FeField;
use crate::solver::SolveReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Last iterate and iteration history of a nonlinear solve that did not converge.
#[derive(Debug, Clone)]
pub struct NonlinearFailure {
    pub last_iterate: FeField,
    pub report: SolveReport,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("unsupported boundary conditions: {0}")]
    UnsupportedBc(String),

    #[error("degenerate element{}: signed area {area:e}", element.map(|e| format!(" {e}")).unwrap_or_default())]
    DegenerateElement { element: Option<usize>, area: f64 },

    #[error("refinement closure did not settle within {depth} passes")]
    RefinementOverflow { depth: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(
        "coefficient {value} at (x = {x:?}, s = {s}) lies outside [{k_alpha}, {k_beta}]"
    )]
    CoefficientBoundsViolation {
        x: [f64; 2],
        s: f64,
        value: f64,
        k_alpha: f64,
        k_beta: f64,
    },

    #[error("linear solve failed after {iterations} iterations (relative residual {residual:e})")]
    LinearSolveFailure { iterations: usize, residual: f64 },

    #[error(
        "nonlinear solve did not converge after {} iterations (last change {:e})",
        .0.report.iterations,
        .0.report.changes.last().copied().unwrap_or(f64::NAN)
    )]
    NonlinearSolveFailure(Box<NonlinearFailure>),

    #[error("invalid constants: {0}")]
    InvalidConstants(String),

    #[error("invalid options: {0}")]
    InvalidOptions(String),

    #[error("fields live on different meshes")]
    MeshMismatch,

    #[error("sign pattern of w = {0:?} matches neither one- nor two-positive-vertex case")]
    InapplicablePattern([f64; 3]),

    #[error("unknown coefficient model `{0}`")]
    UnknownModel(String),

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
