//! Picard solve of the 1D manufactured problem `u = sin(pi x)`, then its
//! local uniqueness certificate.

use uniqfem::certificate::certify;
use uniqfem::fem::error_norms;
use uniqfem::models::sin_problem;
use uniqfem::solver::{picard_solve, SolverOptions};

fn main() -> uniqfem::Result<()> {
    let problem = sin_problem(16)?;
    let (u, report) = picard_solve(&problem, &SolverOptions::default(), None)?;
    println!("converged in {} iterations", report.iterations);
    for (k, c) in report.changes.iter().enumerate() {
        println!("  iteration {:>2}: max change {c:.3e}", k + 1);
    }

    let exact = problem.exact.as_ref().expect("manufactured");
    let (l2, h1) = error_norms(&u, &*exact.u, &*exact.grad, 8)?;
    println!("L2 error {l2:.3e}, H1 seminorm error {h1:.3e}");

    let cert = certify(&u, problem.model.k_alpha(), problem.model.lipschitz())?;
    println!(
        "certificate: pass = {}, max variation {:.4} against threshold {:.4}",
        cert.pass,
        cert.max_variation(),
        cert.elements[0].threshold
    );
    Ok(())
}
