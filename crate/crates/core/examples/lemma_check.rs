//! Evaluate both sides of the two element estimates behind the 2D
//! comparison argument on random acute triangles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uniqfem::certificate::verify_lemma_bounds;
use uniqfem::geometry::triangle_quality;
use uniqfem::models::builtin_model;

fn main() -> uniqfem::Result<()> {
    let model = builtin_model("atan")?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut tried, mut held) = (0, 0);
    let (mut worst1, mut worst2) = (f64::INFINITY, f64::NEG_INFINITY);
    while tried < 1000 {
        let t = [[0.0, 0.0], [1.0, 0.0], [rng.gen_range(0.1..0.9), rng.gen_range(0.55..1.2)]];
        if !triangle_quality(&t)?.acute {
            continue;
        }
        let u1: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let u2: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        // only sign patterns with one or two positive vertices apply
        let Ok(c) = verify_lemma_bounds(&t, u1, u2, &model, 7, 1e-12) else {
            continue;
        };
        tried += 1;
        if c.holds() {
            held += 1;
        }
        worst1 = worst1.min(c.lhs1 / c.rhs1);
        if c.rhs2 > 0.0 {
            worst2 = worst2.max(c.lhs2 / c.rhs2);
        }
    }
    println!("{held} of {tried} checks hold");
    println!("smallest lhs1/rhs1 = {worst1:.4} (must be >= 1)");
    println!("largest  lhs2/rhs2 = {worst2:.4} (must be <= 1)");
    Ok(())
}
