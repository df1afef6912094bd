//! P1 finite elements for quasilinear elliptic problems
//! `-div(kappa(x, u) grad u) = f` in one and two dimensions, with local
//! a posteriori conditions that certify the computed discrete solution is
//! unique, and an adaptive loop that refines only where they fail.
//!
//! The pieces, bottom up: [`geometry`] (meshes, shape quantities,
//! refinement), [`fem`] (assembly and field I/O), [`solver`] (linear
//! solves, Picard iteration, multi-start probe), [`models`] (coefficients,
//! benchmark problems, counterexample arithmetic), [`certificate`],
//! [`adaptivity`] and [`cli`].

pub mod adaptivity;
pub mod certificate;
pub mod cli;
pub mod error;
pub mod fem;
pub mod geometry;
pub mod models;
pub mod solver;

pub use error::{Error, Result};
