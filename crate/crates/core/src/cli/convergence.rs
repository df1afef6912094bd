use serde::Serialize;

use crate::error::{Error, Result};
use crate::fem::error_norms;
use crate::geometry::MeshTopology;
use crate::models::ProblemSpec;
use crate::solver::{picard_solve, SolverOptions};

const NORM_ORDER: usize = 8;
/// Errors below this are treated as exact reproduction; no rate is reported.
const EXACT_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n_elements: usize,
    pub h: f64,
    pub l2_error: f64,
    pub h1_error: f64,
    pub l2_rate: Option<f64>,
    pub h1_rate: Option<f64>,
}

fn rate(e0: f64, e1: f64, h0: f64, h1: f64) -> Option<f64> {
    (e0 > EXACT_FLOOR && e1 > EXACT_FLOOR).then(|| (e0 / e1).ln() / (h0 / h1).ln())
}

/// Solve on `rounds` uniformly refined meshes, starting from the problem's
/// own mesh, and measure errors against its exact solution.
pub fn convergence_study(
    problem: &ProblemSpec,
    rounds: usize,
    solver: &SolverOptions,
) -> Result<Vec<ConvergenceRow>> {
    if rounds < 2 {
        return Err(Error::InvalidOptions(format!(
            "a convergence study needs at least 2 rounds, got {rounds}"
        )));
    }
    let exact = problem.exact.clone().ok_or_else(|| {
        Error::InvalidOptions(format!("problem `{}` has no exact solution", problem.name))
    })?;
    let mut p = problem.clone();
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(rounds);
    for r in 0..rounds {
        if r > 0 {
            let refined = p.mesh.refine_uniform()?;
            p = p.with_mesh(refined.mesh);
        }
        let (u, _) = picard_solve(&p, solver, None)?;
        let (l2, h1) = error_norms(&u, &*exact.u, &*exact.grad, NORM_ORDER)?;
        let h = p.mesh.max_diameter();
        let (l2_rate, h1_rate) = match rows.last() {
            Some(prev) => (rate(prev.l2_error, l2, prev.h, h), rate(prev.h1_error, h1, prev.h, h)),
            None => (None, None),
        };
        rows.push(ConvergenceRow {
            n_elements: p.mesh.n_elements(),
            h,
            l2_error: l2,
            h1_error: h1,
            l2_rate,
            h1_rate,
        });
    }
    Ok(rows)
}

/// Whether every reported rate lies in its band. Steps without a rate
/// (exact reproduction) pass.
pub fn rates_within(rows: &[ConvergenceRow], l2: (f64, f64), h1: (f64, f64)) -> bool {
    let inside = |r: Option<f64>, (lo, hi): (f64, f64)| r.map_or(true, |r| r >= lo && r <= hi);
    rows.len() >= 2 && rows.iter().all(|r| inside(r.l2_rate, l2) && inside(r.h1_rate, h1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{affine_1d, manufactured_problem};

    #[test]
    fn needs_two_rounds() {
        let p = manufactured_problem("sin").unwrap();
        assert!(matches!(
            convergence_study(&p, 1, &SolverOptions::default()),
            Err(Error::InvalidOptions(_))
        ));
    }

    #[test]
    fn affine_is_reproduced() {
        let p = affine_1d(2).unwrap();
        let rows = convergence_study(&p, 3, &SolverOptions::default()).unwrap();
        for r in &rows {
            assert!(r.l2_error < 1e-13 && r.h1_error < 1e-12, "{r:?}");
            assert!(r.l2_rate.is_none());
        }
        assert!(rates_within(&rows, (1.8, 2.2), (0.8, 1.2)));
    }
}
