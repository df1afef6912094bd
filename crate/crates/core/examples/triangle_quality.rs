//! Shape measures of single triangles and a regularity scan of a mesh.

use uniqfem::geometry::{check_regularity, triangle_quality, two_triangle_square, unit_square_acute, BoundaryLabel};

fn main() -> uniqfem::Result<()> {
    let cases = [
        ("equilateral", [[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]]),
        ("acute", [[0.0, 0.0], [1.0, 0.0], [0.4, 0.8]]),
        ("right", [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
        ("obtuse", [[0.0, 0.0], [1.0, 0.0], [0.5, 0.2]]),
    ];
    println!("{:<12} {:>9} {:>9} {:>8} {:>9} acute", "triangle", "min deg", "max deg", "gamma", "c_T");
    for (name, t) in cases {
        let q = triangle_quality(&t)?;
        println!(
            "{name:<12} {:>9.3} {:>9.3} {:>8.4} {:>9.4} {}",
            q.min_angle().to_degrees(),
            q.max_angle().to_degrees(),
            q.gamma,
            q.c_t,
            q.acute
        );
    }

    for (name, mesh) in [
        ("acute unit square", unit_square_acute(0, |_, _| BoundaryLabel::Dirichlet)?),
        ("diagonal split", two_triangle_square()),
    ] {
        let r = check_regularity(&mesh, 30f64.to_radians());
        println!(
            "{name}: angles {:.1}..{:.1} deg, c_min = {:.4}, {} of {} triangles outside [30 deg, 90 deg)",
            r.min_angle.to_degrees(),
            r.max_angle.to_degrees(),
            r.c_min,
            r.violations.len(),
            mesh.triangles().len()
        );
    }
    Ok(())
}
