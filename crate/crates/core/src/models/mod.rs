//! Coefficient models, benchmark problems and the counterexample arithmetic.

mod coefficient;
mod config;
mod counterexample;
mod problems;

pub use coefficient::{
    builtin_model, estimate_lipschitz, scaled_atan, steep_model, CoefficientModel, KappaFn,
    LipschitzEstimate,
};
pub use config::{parse_key_values, parse_named_function, KeyValue, ProblemConfig, PROBLEM_KEYS};
pub use counterexample::{counterexample_1d, counterexample_2d, CounterexampleAnalysis, OneDConstruction};
pub use problems::{
    affine_1d, affine_2d, bubble_problem, builtin_problem, constant, manufactured_problem,
    mixed_1d, sin_problem, steep_problem, ExactSolution, GradFn, LabelFn, MeshGenerator,
    ProblemSpec, ScalarFn, SteepParams, PROBLEM_IDS,
};
