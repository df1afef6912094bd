//! Mesh generators used by the builtin problems, tests and examples.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BoundaryLabel, IntervalMesh, Mesh, MeshTopology, Point, TriMesh};
use crate::error::Result;

pub fn uniform_interval(
    a: f64,
    b: f64,
    n: usize,
    left: BoundaryLabel,
    right: BoundaryLabel,
) -> Result<IntervalMesh> {
    let n = n.max(1);
    let mut pts: Vec<f64> = (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect();
    pts[n] = b;
    IntervalMesh::new(pts, left, right)
}

/// Unit square `[0,1]^2` split into 14 acute triangles (angles between
/// roughly 44.8 and 72.5 degrees), then red-refined `levels` times. Every
/// level stays acute because red children are similar to their parent.
pub fn unit_square_acute(
    levels: usize,
    labeler: impl Fn(Point, Point) -> BoundaryLabel,
) -> Result<TriMesh> {
    let vertices = vec![
        [0.0, 0.0],
        [1.0, 0.0],
        [1.0, 1.0],
        [0.0, 1.0],
        [0.5, 0.0],
        [1.0, 0.5],
        [0.5, 1.0],
        [0.0, 0.5],
        [0.38, 0.38],
        [0.33, 0.67],
        [0.67, 0.33],
        [0.62, 0.62],
    ];
    let triangles = vec![
        [11, 5, 2],
        [6, 11, 2],
        [7, 9, 3],
        [9, 6, 3],
        [6, 9, 11],
        [9, 8, 11],
        [4, 8, 0],
        [8, 7, 0],
        [8, 9, 7],
        [8, 10, 11],
        [10, 8, 4],
        [10, 5, 11],
        [5, 10, 1],
        [10, 4, 1],
    ];
    let mut mesh = TriMesh::with_boundary_labeler(vertices, triangles, labeler)?;
    for _ in 0..levels {
        mesh = match Mesh::Triangle(mesh).refine_uniform()?.mesh {
            Mesh::Triangle(m) => m,
            Mesh::Interval(_) => unreachable!(),
        };
    }
    Ok(mesh)
}

/// Equilateral triangle of side 1 with vertices `(0,0), (1,0), (1/2, sqrt(3)/2)`,
/// split uniformly into `n^2` equilateral triangles.
pub fn equilateral_triangle(
    n: usize,
    labeler: impl Fn(Point, Point) -> BoundaryLabel,
) -> Result<TriMesh> {
    let n = n.max(1);
    let h = 1.0 / n as f64;
    let height = 3f64.sqrt() / 2.0;
    let mut index = vec![vec![0usize; n + 1]; n + 1];
    let mut vertices = Vec::new();
    for j in 0..=n {
        for i in 0..=(n - j) {
            index[j][i] = vertices.len();
            vertices.push([i as f64 * h + 0.5 * j as f64 * h, j as f64 * h * height]);
        }
    }
    let mut triangles = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..(n - j) {
            triangles.push([index[j][i], index[j][i + 1], index[j + 1][i]]);
            if i + j + 1 < n {
                triangles.push([index[j][i + 1], index[j + 1][i + 1], index[j + 1][i]]);
            }
        }
    }
    TriMesh::with_boundary_labeler(vertices, triangles, labeler)
}

/// Unit square split along its diagonal into two right triangles, all Dirichlet.
pub fn two_triangle_square() -> TriMesh {
    TriMesh::with_boundary_labeler(
        vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
        vec![[0, 1, 2], [0, 2, 3]],
        |_, _| BoundaryLabel::Dirichlet,
    )
    .expect("static mesh is valid")
}

/// Move every vertex that is not on the boundary by a uniform random offset
/// of at most `fraction` times the shortest edge touching it, per coordinate.
pub fn perturb_interior_vertices(mesh: &TriMesh, fraction: f64, seed: u64) -> Result<TriMesh> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let on_boundary: HashSet<usize> = mesh
        .boundary_edges()
        .iter()
        .flat_map(|b| b.vertices)
        .collect();
    let mut shortest = vec![f64::INFINITY; mesh.n_vertices()];
    for (a, b) in mesh.edges() {
        let (p, q) = (mesh.vertex(a), mesh.vertex(b));
        let len = (p[0] - q[0]).hypot(p[1] - q[1]);
        shortest[a] = shortest[a].min(len);
        shortest[b] = shortest[b].min(len);
    }
    let vertices: Vec<Point> = (0..mesh.n_vertices())
        .map(|v| {
            let p = mesh.vertex(v);
            if on_boundary.contains(&v) {
                return p;
            }
            let r = fraction * shortest[v];
            [
                p[0] + rng.gen_range(-r..=r),
                p[1] + rng.gen_range(-r..=r),
            ]
        })
        .collect();
    TriMesh::new(
        vertices,
        mesh.triangles().to_vec(),
        mesh.boundary_edges().to_vec(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn square_base_mesh_is_acute_and_covers_unit_area() {
        let m = unit_square_acute(0, |_, _| BoundaryLabel::Dirichlet).unwrap();
        assert_eq!(m.n_elements(), 14);
        assert!(m.is_acute());
        let area: f64 = (0..14).map(|e| m.quality(e).area).sum();
        assert!((area - 1.0).abs() < 1e-14);
        for e in 0..14 {
            let q = m.quality(e);
            assert!(q.max_angle() < 73.0 * PI / 180.0);
            assert!(q.min_angle() > 44.0 * PI / 180.0);
        }
        assert_eq!(m.boundary_edges().len(), 8);
    }

    #[test]
    fn square_refinement_stays_acute() {
        let m = unit_square_acute(2, |_, _| BoundaryLabel::Dirichlet).unwrap();
        assert_eq!(m.n_elements(), 14 * 16);
        assert!(m.is_acute());
    }

    #[test]
    fn equilateral_counts() {
        let m = equilateral_triangle(4, |_, _| BoundaryLabel::Dirichlet).unwrap();
        assert_eq!(m.n_elements(), 16);
        assert_eq!(m.n_vertices(), 15);
        assert_eq!(m.boundary_edges().len(), 12);
        for e in 0..16 {
            assert!((m.quality(e).gamma - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn perturbation_keeps_boundary() {
        let m = unit_square_acute(1, |_, _| BoundaryLabel::Dirichlet).unwrap();
        let p = perturb_interior_vertices(&m, 0.01, 3).unwrap();
        for b in p.boundary_edges() {
            for v in b.vertices {
                assert_eq!(p.vertex(v), m.vertex(v));
            }
        }
        assert!(p.is_acute());
    }
}
