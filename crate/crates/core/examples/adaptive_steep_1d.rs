//! Certificate-driven refinement on a 1D problem with two sharp fronts.
//!
//! Only the coarse elements that contain a front are ever refined; the
//! rest of the mesh keeps its initial size.

use uniqfem::adaptivity::{adaptive_certify, AdaptiveOptions};
use uniqfem::geometry::MeshTopology;
use uniqfem::models::{steep_problem, SteepParams};

fn main() -> uniqfem::Result<()> {
    let problem = steep_problem(SteepParams::default())?;
    let sol = adaptive_certify(&problem, &AdaptiveOptions::default())?;

    println!("round  elements  failing  max variation  refined roots");
    for r in &sol.history {
        println!(
            "{:>5}  {:>8}  {:>7}  {:>13.6}  {:>13}",
            r.round, r.n_elements, r.n_failing, r.max_variation, r.refined_roots
        );
    }
    println!("status: {:?}", sol.status);
    println!(
        "refined {} of {} initial elements ({:.1}%): {:?}",
        sol.refined_roots.len(),
        sol.initial_elements,
        100.0 * sol.refined_fraction(),
        sol.refined_roots
    );
    let mesh = sol.field.mesh();
    let h_min = (0..mesh.n_elements()).map(|e| mesh.element_diameter(e)).fold(f64::INFINITY, f64::min);
    println!("final h_min = {h_min:.3e}, h_max = {:.3e}", mesh.max_diameter());
    Ok(())
}
