//! 2D bubble problem on the acute unit-square mesh: solve, certify per
//! element and with the mesh-wide bound, and write the field to disk.

use std::fs::File;
use std::io::BufWriter;

use uniqfem::certificate::{certify, certify_2d_global};
use uniqfem::fem::{error_norms, write_vtk};
use uniqfem::geometry::MeshTopology;
use uniqfem::models::bubble_problem;
use uniqfem::solver::{picard_solve, SolverOptions};

fn main() -> uniqfem::Result<()> {
    let problem = bubble_problem(2)?;
    let (u, report) = picard_solve(&problem, &SolverOptions::default(), None)?;
    println!(
        "{} triangles, {} vertices: converged in {} iterations",
        problem.mesh.n_elements(),
        problem.mesh.n_vertices(),
        report.iterations
    );
    let exact = problem.exact.as_ref().expect("manufactured");
    let (l2, h1) = error_norms(&u, &*exact.u, &*exact.grad, 8)?;
    println!("L2 error {l2:.3e}, H1 seminorm error {h1:.3e}");

    let (ka, l0) = (problem.model.k_alpha(), problem.model.lipschitz());
    let cert = certify(&u, ka, l0)?;
    println!(
        "per-element certificate: pass = {}, {} failing, min margin {:.3e}",
        cert.pass,
        cert.n_failing,
        cert.min_margin()
    );
    let global = certify_2d_global(&u, ka, l0, 40f64.to_radians())?;
    println!(
        "mesh-wide bound {:.4} (s_min {:.3}, c_min {:.3}) vs max variation {:.4}: pass = {}",
        global.bound, global.s_min, global.c_min, global.max_variation, global.pass
    );

    let path = std::env::temp_dir().join("uniqfem_bubble.vtk");
    write_vtk(&u, BufWriter::new(File::create(&path)?))?;
    println!("wrote {}", path.display());
    Ok(())
}
