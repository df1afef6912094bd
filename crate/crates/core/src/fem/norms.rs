use super::element::basis_gradients;
use super::field::FeField;
use super::quadrature::{interval_rule, triangle_rule};
use crate::error::Result;
use crate::geometry::{Mesh, MeshTopology, Point};

/// `(||u - u_h||_{L2}, |u - u_h|_{H1})` by elementwise quadrature of the
/// given order.
pub fn error_norms(
    field: &FeField,
    exact: &dyn Fn(Point) -> f64,
    exact_grad: &dyn Fn(Point) -> [f64; 2],
    order: usize,
) -> Result<(f64, f64)> {
    let mesh = field.mesh();
    let u = field.values();
    let (mut l2, mut h1) = (0.0, 0.0);
    match &**mesh {
        Mesh::Interval(m) => {
            let (pts, wts) = interval_rule(order);
            for e in 0..m.n_elements() {
                let (a, h) = (m.breakpoints()[e], m.h(e));
                let slope = (u[e + 1] - u[e]) / h;
                for (&r, &w) in pts.iter().zip(&wts) {
                    let x = [a + r * h, 0.0];
                    let uh = (1.0 - r) * u[e] + r * u[e + 1];
                    l2 += w * h * (exact(x) - uh).powi(2);
                    h1 += w * h * (exact_grad(x)[0] - slope).powi(2);
                }
            }
        }
        Mesh::Triangle(m) => {
            let rule = triangle_rule(order);
            for e in 0..m.n_elements() {
                let t = m.triangle(e);
                let p = m.triangle_points(e);
                let g = basis_gradients(&p)?;
                let vals = [u[t[0]], u[t[1]], u[t[2]]];
                let gh = g.gradient_of(vals);
                for (b, w) in rule.points.iter().zip(&rule.weights) {
                    let x = [
                        b[0] * p[0][0] + b[1] * p[1][0] + b[2] * p[2][0],
                        b[0] * p[0][1] + b[1] * p[1][1] + b[2] * p[2][1],
                    ];
                    let uh = b[0] * vals[0] + b[1] * vals[1] + b[2] * vals[2];
                    let ge = exact_grad(x);
                    l2 += w * g.area * (exact(x) - uh).powi(2);
                    h1 += w * g.area * ((ge[0] - gh[0]).powi(2) + (ge[1] - gh[1]).powi(2));
                }
            }
        }
    }
    Ok((l2.sqrt(), h1.sqrt()))
}
