//! Threshold arithmetic of the nonuniqueness constructions: for every `k`
//! in (0, 1/2) the certificate threshold stays below the solution jump.

use uniqfem::models::{counterexample_1d, counterexample_2d};

fn main() -> uniqfem::Result<()> {
    println!("{:>6} {:>12} {:>12} {:>12}", "k", "1D thresh", "1D secant", "2D thresh");
    for k in [0.05, 0.1, 0.2, 0.25, 1.0 / 3.0, 0.4, 0.45, 0.49] {
        let a = counterexample_1d(k, 1.0)?;
        let b = counterexample_2d(k, 1.0)?;
        let secant = a.one_d.as_ref().map(|r| r.secant_threshold).unwrap_or(f64::NAN);
        println!("{k:>6.3} {:>12.6} {:>12.6} {:>12.6}", a.threshold, secant, b.threshold);
        assert!(a.violated && b.violated);
    }
    println!("u1 = 1 in every row: no threshold exceeds the jump");
    Ok(())
}
