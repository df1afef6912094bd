use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use super::{MeshTopology, Point, TriMesh};
use crate::error::{Error, Result};

/// Relative degeneracy threshold: a triangle whose area is at most this
/// times the square of its longest edge is rejected.
pub const DEGENERACY_TOL: f64 = 1e-14;

pub fn signed_area(t: &[Point; 3]) -> f64 {
    let [a, b, c] = t;
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

fn sub(p: Point, q: Point) -> Point {
    [p[0] - q[0], p[1] - q[1]]
}

fn norm(p: Point) -> f64 {
    p[0].hypot(p[1])
}

fn max_edge_sq(t: &[Point; 3]) -> f64 {
    (0..3)
        .map(|i| {
            let d = sub(t[(i + 1) % 3], t[(i + 2) % 3]);
            d[0] * d[0] + d[1] * d[1]
        })
        .fold(0.0, f64::max)
}

fn check_nondegenerate(t: &[Point; 3]) -> Result<f64> {
    let area = signed_area(t);
    if !(area > DEGENERACY_TOL * max_edge_sq(t)) {
        return Err(Error::DegenerateElement {
            element: None,
            area,
        });
    }
    Ok(area)
}

/// Shape data of one triangle. Index `i` of `angles` is the interior angle
/// at vertex `i`; index `i` of `edges` is the length of the edge opposite
/// vertex `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangleQuality {
    pub angles: [f64; 3],
    /// Minimum ratio of sines of the interior angles.
    pub gamma: f64,
    /// Minimum cosine of the interior angles.
    pub c_t: f64,
    pub area: f64,
    pub edges: [f64; 3],
    pub acute: bool,
}

impl TriangleQuality {
    pub fn min_angle(&self) -> f64 {
        self.angles.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_angle(&self) -> f64 {
        self.angles.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn triangle_quality(t: &[Point; 3]) -> Result<TriangleQuality> {
    let area = check_nondegenerate(t)?;
    let mut angles = [0.0; 3];
    let mut cosines = [0.0; 3];
    let mut edges = [0.0; 3];
    for i in 0..3 {
        let u = sub(t[(i + 1) % 3], t[i]);
        let v = sub(t[(i + 2) % 3], t[i]);
        let dot = u[0] * v[0] + u[1] * v[1];
        let cross = (u[0] * v[1] - u[1] * v[0]).abs();
        angles[i] = cross.atan2(dot);
        cosines[i] = dot / (norm(u) * norm(v));
        edges[i] = norm(sub(t[(i + 2) % 3], t[(i + 1) % 3]));
    }
    // Law of sines: the extreme sine ratio is the extreme edge ratio.
    let min_edge = edges.iter().copied().fold(f64::INFINITY, f64::min);
    let max_edge = edges.iter().copied().fold(0.0, f64::max);
    let c_t = cosines.iter().copied().fold(f64::INFINITY, f64::min);
    let max_angle = angles.iter().copied().fold(0.0, f64::max);
    Ok(TriangleQuality {
        angles,
        gamma: min_edge / max_edge,
        c_t,
        area,
        edges,
        acute: max_angle < FRAC_PI_2 && c_t > 0.0,
    })
}

/// Affine map from the reference triangle `(0,0), (1,0), (0,1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    /// Row-major Jacobian; columns are `a_2 - a_1` and `a_3 - a_1`.
    pub j: [[f64; 2]; 2],
    pub translation: Point,
    pub det: f64,
}

impl AffineMap {
    pub fn map(&self, r: Point) -> Point {
        [
            self.translation[0] + self.j[0][0] * r[0] + self.j[0][1] * r[1],
            self.translation[1] + self.j[1][0] * r[0] + self.j[1][1] * r[1],
        ]
    }

    /// `J^{-T}`, row-major.
    pub fn inverse_transpose(&self) -> [[f64; 2]; 2] {
        let inv_det = 1.0 / self.det;
        [
            [self.j[1][1] * inv_det, -self.j[1][0] * inv_det],
            [-self.j[0][1] * inv_det, self.j[0][0] * inv_det],
        ]
    }
}

pub fn jacobian(t: &[Point; 3]) -> Result<AffineMap> {
    check_nondegenerate(t)?;
    let [a1, a2, a3] = *t;
    let j = [[a2[0] - a1[0], a3[0] - a1[0]], [a2[1] - a1[1], a3[1] - a1[1]]];
    Ok(AffineMap {
        j,
        translation: a1,
        det: j[0][0] * j[1][1] - j[0][1] * j[1][0],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityViolation {
    pub element: usize,
    pub min_angle: f64,
    pub max_angle: f64,
    pub below_min_angle: bool,
    pub not_acute: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityReport {
    pub t_min: f64,
    pub violations: Vec<RegularityViolation>,
    pub min_angle: f64,
    pub max_angle: f64,
    /// `sin` of the smallest angle in the mesh.
    pub s_min: f64,
    /// Smallest `c_T` over the mesh.
    pub c_min: f64,
}

impl RegularityReport {
    pub fn is_regular(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Scan every triangle for `t_min <= theta < pi/2`.
pub fn check_regularity(mesh: &TriMesh, t_min: f64) -> RegularityReport {
    let mut report = RegularityReport {
        t_min,
        violations: Vec::new(),
        min_angle: f64::INFINITY,
        max_angle: f64::NEG_INFINITY,
        s_min: f64::NAN,
        c_min: f64::INFINITY,
    };
    for e in 0..mesh.n_elements() {
        // Mesh construction already rejected degenerate triangles.
        let q = mesh.quality(e);
        let (lo, hi) = (q.min_angle(), q.max_angle());
        report.min_angle = report.min_angle.min(lo);
        report.max_angle = report.max_angle.max(hi);
        report.c_min = report.c_min.min(q.c_t);
        let below = lo < t_min;
        let obtuse = !q.acute;
        if below || obtuse {
            report.violations.push(RegularityViolation {
                element: e,
                min_angle: lo,
                max_angle: hi,
                below_min_angle: below,
                not_acute: obtuse,
            });
        }
    }
    report.s_min = report.min_angle.sin();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const EQUILATERAL: [Point; 3] = [[0.0, 0.0], [1.0, 0.0], [0.5, 0.866_025_403_784_438_6]];

    #[test]
    fn equilateral_quality() {
        let q = triangle_quality(&EQUILATERAL).unwrap();
        for a in q.angles {
            assert!((a - PI / 3.0).abs() < 1e-12);
        }
        assert!((q.gamma - 1.0).abs() < 1e-15);
        assert!((q.c_t - 0.5).abs() < 1e-15);
        assert!((q.area - 3f64.sqrt() / 4.0).abs() < 1e-15);
        assert!(q.acute);
    }

    #[test]
    fn right_triangle_is_not_acute() {
        let q = triangle_quality(&[[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]]).unwrap();
        assert!((q.max_angle() - PI / 2.0).abs() < 1e-15);
        assert_eq!(q.c_t, 0.0);
        assert!(!q.acute);
        assert_eq!(q.edges, [5.0, 3.0, 4.0]);
    }

    #[test]
    fn flat_apex_is_obtuse() {
        let t = [[0.0, 0.0], [1.0, 0.0], [0.5, 0.1]];
        // Law of cosines at the apex: cos = (a^2 + b^2 - c^2) / (2ab).
        let a2: f64 = 0.5 * 0.5 + 0.1 * 0.1;
        let cos_apex = (2.0 * a2 - 1.0) / (2.0 * a2);
        assert!(cos_apex < 0.0);
        let q = triangle_quality(&t).unwrap();
        assert!(!q.acute);
        assert!((q.angles[2] - cos_apex.acos()).abs() < 1e-12);
    }

    #[test]
    fn degenerate_and_clockwise_rejected() {
        let flat = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]];
        assert!(matches!(
            triangle_quality(&flat),
            Err(Error::DegenerateElement { .. })
        ));
        let cw = [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]];
        assert!(matches!(jacobian(&cw), Err(Error::DegenerateElement { .. })));
    }

    #[test]
    fn reference_jacobian() {
        let map = jacobian(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(map.j, [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(map.det, 1.0);
        let map = jacobian(&[[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]]).unwrap();
        assert_eq!(map.det, 4.0);
    }

    #[test]
    fn equilateral_jacobian_matches_shoelace() {
        let map = jacobian(&EQUILATERAL).unwrap();
        let [a, b, c] = EQUILATERAL;
        let shoelace = 0.5
            * (a[0] * b[1] - b[0] * a[1] + b[0] * c[1] - c[0] * b[1] + c[0] * a[1]
                - a[0] * c[1]);
        assert!((map.det - 2.0 * shoelace).abs() < 1e-15);
        assert!((map.det - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn map_hits_vertices() {
        let t = [[0.3, -0.2], [1.4, 0.1], [0.5, 0.9]];
        let map = jacobian(&t).unwrap();
        assert_eq!(map.map([0.0, 0.0]), t[0]);
        let p = map.map([1.0, 0.0]);
        assert!((p[0] - t[1][0]).abs() < 1e-15 && (p[1] - t[1][1]).abs() < 1e-15);
    }
}
