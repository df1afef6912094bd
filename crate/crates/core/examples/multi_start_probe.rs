//! Search for a second discrete solution from random initial fields. On a
//! certified problem every start lands in the same cluster.

use uniqfem::certificate::certify;
use uniqfem::models::{mixed_1d, steep_problem, SteepParams};
use uniqfem::solver::{multi_start, picard_solve, MultiStartOptions, SolverOptions};

fn main() -> uniqfem::Result<()> {
    let solver = SolverOptions::default();
    let opts = MultiStartOptions {
        n_starts: 16,
        seed: 7,
        ..Default::default()
    };
    for problem in [mixed_1d(16, 0.5)?, steep_problem(SteepParams::default())?] {
        let (u, _) = picard_solve(&problem, &solver, None)?;
        let cert = certify(&u, problem.model.k_alpha(), problem.model.lipschitz())?;
        let probe = multi_start(&problem, &solver, &opts)?;
        println!(
            "{}: certified = {}, {} starts -> {} cluster(s), {} failed",
            problem.name,
            cert.pass,
            opts.n_starts,
            probe.clusters.len(),
            probe.failures
        );
        for (k, c) in probe.clusters.iter().enumerate() {
            println!("  cluster {k}: {} members, diameter {:.2e}", c.members.len(), c.diameter);
        }
    }
    Ok(())
}
