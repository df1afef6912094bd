use serde::Serialize;

use super::linear::solve_spd;
use crate::error::{Error, NonlinearFailure, Result};
use crate::fem::{
    assemble_load, assemble_stiffness, eliminate_dirichlet, nonlinear_residual, FeField,
    ResidualNorms,
};
use crate::models::ProblemSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverOptions {
    /// Relative residual for each linear solve.
    pub linear_tol: f64,
    pub linear_max_iter: usize,
    /// Maximum nodal change between Picard iterates.
    pub nonlinear_tol: f64,
    pub max_iterations: usize,
    /// Initial damping factor of each Picard step.
    pub damping: f64,
    /// Smallest damping factor tried when the residual grows.
    pub min_damping: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            linear_tol: 1e-12,
            linear_max_iter: 20_000,
            nonlinear_tol: 1e-10,
            max_iterations: 200,
            damping: 1.0,
            min_damping: 1.0 / 16.0,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidOptions(m));
        if !(self.linear_tol > 0.0) || !(self.nonlinear_tol > 0.0) {
            return bad(format!(
                "tolerances must be positive (linear {}, nonlinear {})",
                self.linear_tol, self.nonlinear_tol
            ));
        }
        if self.linear_max_iter == 0 || self.max_iterations == 0 {
            return bad("iteration limits must be at least 1".into());
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return bad(format!("damping must lie in (0, 1], got {}", self.damping));
        }
        if !(self.min_damping > 0.0 && self.min_damping <= self.damping) {
            return bad(format!(
                "min_damping must lie in (0, damping], got {}",
                self.min_damping
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub iterations: usize,
    /// Maximum nodal change of each iteration.
    pub changes: Vec<f64>,
    /// Damping factor accepted in each iteration.
    pub damping: Vec<f64>,
    pub final_linear_residual: f64,
    pub final_residual: Option<ResidualNorms>,
    pub converged: bool,
}

/// Frozen-coefficient iteration: solve `K(u_m) u_hat = F`, then
/// `u_{m+1} = u_m + lambda (u_hat - u_m)`.
///
/// Each step starts at `opts.damping` and halves `lambda` (down to
/// `opts.min_damping`) while the nonlinear residual would grow. The loop
/// stops when the nodal change is at most `nonlinear_tol` and the residual
/// is at most `nonlinear_tol` times its scale, or when the change drops
/// below `nonlinear_tol / 1000` (the residual is then at roundoff level).
///
/// `u0` defaults to zero; its Dirichlet values are overwritten with the
/// problem's boundary data.
pub fn picard_solve(
    problem: &ProblemSpec,
    opts: &SolverOptions,
    u0: Option<&FeField>,
) -> Result<(FeField, SolveReport)> {
    opts.validate()?;
    let mesh = &problem.mesh;
    let mut u = match u0 {
        Some(f) => {
            if !(std::sync::Arc::ptr_eq(f.mesh(), mesh) || **f.mesh() == **mesh) {
                return Err(Error::MeshMismatch);
            }
            FeField::from_values(mesh.clone(), f.values().to_vec())?
        }
        None => FeField::zeros(mesh.clone()),
    };
    let g = problem.dirichlet.clone();
    u.impose_dirichlet(|p| g(p));

    let asm = problem.assembly;
    let load = assemble_load(mesh, &*problem.source, &*problem.neumann, asm.load_order);
    let mut res = nonlinear_residual(mesh, &problem.model, u.values(), &load, &asm)?;
    let mut report = SolveReport {
        iterations: 0,
        changes: Vec::new(),
        damping: Vec::new(),
        final_linear_residual: 0.0,
        final_residual: Some(res),
        converged: false,
    };

    for it in 1..=opts.max_iterations {
        let k = assemble_stiffness(mesh, &problem.model, u.values(), asm.stiffness_order)?;
        let sys = eliminate_dirichlet(mesh, &k, &load, u.values())?;
        let sol = solve_spd(&sys.matrix, &sys.rhs, opts.linear_tol, opts.linear_max_iter)?;
        let u_hat = sys.expand(&sol.x, u.values());
        report.final_linear_residual = sol.residual;

        let step = |lambda: f64| -> Vec<f64> {
            u.values()
                .iter()
                .zip(&u_hat)
                .map(|(a, b)| a + lambda * (b - a))
                .collect()
        };
        let mut lambda = opts.damping;
        let mut cand = step(lambda);
        let mut cand_res = nonlinear_residual(mesh, &problem.model, &cand, &load, &asm)?;
        while cand_res.residual > res.residual && lambda * 0.5 >= opts.min_damping {
            lambda *= 0.5;
            cand = step(lambda);
            cand_res = nonlinear_residual(mesh, &problem.model, &cand, &load, &asm)?;
        }
        let change = u
            .values()
            .iter()
            .zip(&cand)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        u.values_mut().copy_from_slice(&cand);
        res = cand_res;
        report.iterations = it;
        report.changes.push(change);
        report.damping.push(lambda);
        report.final_residual = Some(res);
        log::debug!(
            "picard {it}: change {change:e}, residual {:e}, lambda {lambda}",
            res.residual
        );
        if !change.is_finite() {
            break;
        }
        let small_residual = res.residual <= opts.nonlinear_tol * res.scale.max(f64::MIN_POSITIVE);
        if (change <= opts.nonlinear_tol && small_residual) || change <= 1e-3 * opts.nonlinear_tol
        {
            report.converged = true;
            return Ok((u, report));
        }
    }
    Err(Error::NonlinearSolveFailure(Box::new(NonlinearFailure {
        last_iterate: u,
        report,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{affine_1d, builtin_model, ProblemSpec};
    use crate::geometry::{uniform_interval, BoundaryLabel};

    fn rational_problem() -> ProblemSpec {
        let mesh = uniform_interval(0.0, 1.0, 8, BoundaryLabel::Dirichlet, BoundaryLabel::Dirichlet).unwrap();
        ProblemSpec::new("f1", mesh, builtin_model("rational").unwrap()).with_source(|_| 1.0)
    }

    #[test]
    fn linear_problem_reaches_fixed_point_immediately() {
        let p = affine_1d(4).unwrap();
        let (u, rep) = picard_solve(&p, &SolverOptions::default(), None).unwrap();
        assert_eq!(rep.iterations, 2);
        assert!(rep.changes[1] <= 1e-12);
        for (v, x) in u.values().iter().zip([0.0, 0.25, 0.5, 0.75, 1.0]) {
            assert!((v - (1.0 + 2.0 * x)).abs() < 1e-13);
        }
    }

    #[test]
    fn nonlinear_residual_small() {
        let p = rational_problem();
        let (u, rep) = picard_solve(&p, &SolverOptions::default(), None).unwrap();
        assert!(rep.converged);
        let load = assemble_load(&p.mesh, &*p.source, &*p.neumann, 2);
        let r = nonlinear_residual(&p.mesh, &p.model, u.values(), &load, &p.assembly).unwrap();
        assert!(r.residual <= 1e-8);
        // Restarting from the solution is a fixed point.
        let (_, rep2) = picard_solve(&p, &SolverOptions::default(), Some(&u)).unwrap();
        assert_eq!(rep2.iterations, 1);
        assert!(rep2.changes[0] <= 1e-10);
    }

    #[test]
    fn forced_failure_carries_iterate() {
        let p = rational_problem();
        let opts = SolverOptions {
            max_iterations: 1,
            ..Default::default()
        };
        match picard_solve(&p, &opts, None) {
            Err(Error::NonlinearSolveFailure(f)) => {
                assert_eq!(f.report.iterations, 1);
                assert!(!f.report.converged);
                assert_eq!(f.last_iterate.len(), 9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn options_validated() {
        let p = rational_problem();
        let opts = SolverOptions {
            damping: 1.5,
            ..Default::default()
        };
        assert!(matches!(picard_solve(&p, &opts, None), Err(Error::InvalidOptions(_))));
    }
}
