//! Linear SPD solves, the Picard loop, and the multi-start probe.

mod linear;
mod multistart;
mod picard;

pub use linear::{conjugate_gradient, solve_spd, thomas, LinearSolution};
pub use multistart::{
    multi_start, random_start, MultiStartOptions, MultiStartResult, SolutionCluster,
};
pub use picard::{picard_solve, SolveReport, SolverOptions};
