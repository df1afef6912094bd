//! Mesh and field files: write a mesh in the text format, read it back,
//! refine part of it, and export a field as CSV and legacy VTK.

use std::sync::Arc;

use uniqfem::fem::{read_csv, write_csv, write_vtk, FeField};
use uniqfem::geometry::{read_mesh, unit_square_acute, write_mesh, BoundaryLabel, Mesh, MeshTopology, DEFAULT_CLOSURE_DEPTH};

fn main() -> uniqfem::Result<()> {
    let square = unit_square_acute(0, |a, b| {
        // Neumann on the top edge, Dirichlet elsewhere
        if a[1] == 1.0 && b[1] == 1.0 {
            BoundaryLabel::Neumann
        } else {
            BoundaryLabel::Dirichlet
        }
    })?;
    let mesh = Mesh::Triangle(square.clone());

    let mut text = Vec::new();
    write_mesh(&mesh, &mut text)?;
    let back = read_mesh(text.as_slice())?;
    assert_eq!(back, mesh);
    println!("mesh file: {} lines, round trip exact", text.split(|&b| b == b'\n').count() - 1);

    let refined = square.refine(&[0, 1], DEFAULT_CLOSURE_DEPTH)?;
    let fine = Arc::new(refined.mesh.clone());
    println!(
        "refined 2 of {} triangles (plus closure): {} triangles, acute = {}",
        mesh.n_elements(),
        fine.n_elements(),
        fine.as_triangle().map(|m| m.is_acute()).unwrap_or(false)
    );

    let u = FeField::interpolate(fine.clone(), |p| p[0] * (1.0 - p[0]) + p[1]);
    let mut csv = Vec::new();
    write_csv(&u, &mut csv)?;
    let again = read_csv(csv.as_slice(), fine)?;
    assert_eq!(again.values(), u.values());

    let mut vtk = Vec::new();
    write_vtk(&u, &mut vtk)?;
    let vtk = String::from_utf8_lossy(&vtk);
    println!("VTK header: {}", vtk.lines().take(4).collect::<Vec<_>>().join(" | "));
    Ok(())
}
