//! Observed convergence rates under uniform refinement: about 2 in L2 and
//! 1 in the H1 seminorm for P1 elements.

use uniqfem::cli::convergence_study;
use uniqfem::models::{bubble_problem, sin_problem};
use uniqfem::solver::SolverOptions;

fn main() -> uniqfem::Result<()> {
    let opts = SolverOptions::default();
    for problem in [sin_problem(4)?, bubble_problem(0)?] {
        println!("{}", problem.name);
        println!("{:>9} {:>10} {:>11} {:>6} {:>11} {:>6}", "elements", "h", "L2", "rate", "H1", "rate");
        for r in convergence_study(&problem, 5, &opts)? {
            let rate = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.3}"));
            println!(
                "{:>9} {:>10.4e} {:>11.4e} {:>6} {:>11.4e} {:>6}",
                r.n_elements,
                r.h,
                r.l2_error,
                rate(r.l2_rate),
                r.h1_error,
                rate(r.h1_rate)
            );
        }
    }
    Ok(())
}
