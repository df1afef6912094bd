use super::quadrature::{interval_rule, triangle_rule};
use crate::error::Result;
use crate::geometry::{jacobian, triangle_quality, Point};
use crate::models::CoefficientModel;

/// Constant gradients of the three P1 basis functions on a triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementGradients {
    pub grads: [[f64; 2]; 3],
    pub area: f64,
}

impl ElementGradients {
    /// `grad phi_i . grad phi_j` (no area factor).
    pub fn dot(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (self.grads[i], self.grads[j]);
        a[0] * b[0] + a[1] * b[1]
    }

    /// Gradient of the P1 function with the given vertex values.
    pub fn gradient_of(&self, values: [f64; 3]) -> [f64; 2] {
        let mut g = [0.0; 2];
        for (v, gi) in values.iter().zip(&self.grads) {
            g[0] += v * gi[0];
            g[1] += v * gi[1];
        }
        g
    }
}

const REFERENCE_GRADS: [[f64; 2]; 3] = [[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]];

/// `grad phi_i = J^{-T} grad phi_hat_i`.
pub fn basis_gradients(t: &[Point; 3]) -> Result<ElementGradients> {
    let map = jacobian(t)?;
    let jit = map.inverse_transpose();
    let mut grads = [[0.0; 2]; 3];
    for (g, r) in grads.iter_mut().zip(REFERENCE_GRADS) {
        *g = [
            jit[0][0] * r[0] + jit[0][1] * r[1],
            jit[1][0] * r[0] + jit[1][1] * r[1],
        ];
    }
    Ok(ElementGradients {
        grads,
        area: 0.5 * map.det,
    })
}

/// `int_T grad phi_i . grad phi_j` from edge lengths and angles:
/// `|e_i|^2 / (4|T|)` on the diagonal and `-|e_i||e_j| cos(theta_k) / (4|T|)`
/// off it, where `k` is the third index.
pub fn grad_inner_products(t: &[Point; 3]) -> Result<[[f64; 3]; 3]> {
    let q = triangle_quality(t)?;
    let e = q.edges;
    let four_area = 4.0 * q.area;
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        m[i][i] = e[i] * e[i] / four_area;
        for j in 0..3 {
            if i != j {
                let k = 3 - i - j;
                m[i][j] = -e[i] * e[j] * q.angles[k].cos() / four_area;
            }
        }
    }
    Ok(m)
}

fn eval_at(model: &CoefficientModel, x: Point, s: f64) -> Result<f64> {
    model.checked_eval(x, s)
}

/// Average of `kappa(x, u_h(x))` over the triangle with a rule of the given order.
pub fn mean_coefficient_tri(
    t: &[Point; 3],
    model: &CoefficientModel,
    u_local: [f64; 3],
    order: usize,
) -> Result<f64> {
    let rule = triangle_rule(order);
    let mut acc = 0.0;
    for (b, w) in rule.points.iter().zip(&rule.weights) {
        let x = [
            b[0] * t[0][0] + b[1] * t[1][0] + b[2] * t[2][0],
            b[0] * t[0][1] + b[1] * t[1][1] + b[2] * t[2][1],
        ];
        let s = b[0] * u_local[0] + b[1] * u_local[1] + b[2] * u_local[2];
        acc += w * eval_at(model, x, s)?;
    }
    Ok(acc)
}

/// `K_ij = sum_q w_q kappa(x_q, u_h(x_q)) |T| grad phi_i . grad phi_j`.
///
/// The gradients are constant, so this is the averaged coefficient times
/// the gradient Gram matrix; the result is symmetric bit for bit.
pub fn element_stiffness(
    t: &[Point; 3],
    model: &CoefficientModel,
    u_local: [f64; 3],
    order: usize,
) -> Result<[[f64; 3]; 3]> {
    let g = basis_gradients(t)?;
    let scale = mean_coefficient_tri(t, model, u_local, order)? * g.area;
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = scale * g.dot(i, j);
        }
    }
    Ok(k)
}

/// 1D element `(a, b)`: `(mean kappa / h) [[1, -1], [-1, 1]]`.
pub fn interval_stiffness(
    a: f64,
    b: f64,
    model: &CoefficientModel,
    u_local: [f64; 2],
    order: usize,
) -> Result<[[f64; 2]; 2]> {
    let (pts, wts) = interval_rule(order);
    let h = b - a;
    let mut mean = 0.0;
    for (&r, &w) in pts.iter().zip(&wts) {
        let s = (1.0 - r) * u_local[0] + r * u_local[1];
        mean += w * eval_at(model, [a + r * h, 0.0], s)?;
    }
    let d = mean / h;
    Ok([[d, -d], [-d, d]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::builtin_model;

    const EQUI: [Point; 3] = [[0.0, 0.0], [1.0, 0.0], [0.5, 0.866_025_403_784_438_6]];
    const REF: [Point; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

    #[test]
    fn reference_gradients() {
        let g = basis_gradients(&REF).unwrap();
        assert_eq!(g.grads, [[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(g.area, 0.5);
    }

    #[test]
    fn equilateral_gradient_norm() {
        let g = basis_gradients(&EQUI).unwrap();
        for i in 0..3 {
            assert!((g.dot(i, i).sqrt() - 2.0 / 3f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn inner_products_equilateral_and_reference() {
        let m = grad_inner_products(&EQUI).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j {
                    1.0 / 3f64.sqrt()
                } else {
                    -0.5 / 3f64.sqrt()
                };
                assert!((m[i][j] - expect).abs() < 1e-12);
            }
        }
        let m = grad_inner_products(&REF).unwrap();
        assert!((m[0][0] - 1.0).abs() < 1e-15);
        assert!((m[1][1] - 0.5).abs() < 1e-15);
        assert!((m[2][2] - 0.5).abs() < 1e-15);
        assert!(m[1][2].abs() < 1e-16);
    }

    #[test]
    fn unit_and_constant_coefficient() {
        let t = [[0.1, 0.2], [1.3, 0.4], [0.5, 1.1]];
        let unit = builtin_model("unit").unwrap();
        let k = element_stiffness(&t, &unit, [0.3, -2.0, 4.0], 2).unwrap();
        let g = grad_inner_products(&t).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((k[i][j] - g[i][j]).abs() < 1e-13);
            }
        }
        let c = crate::models::CoefficientModel::new("c", 1.0, 4.0, 1.0, |_, _| 3.0).unwrap();
        let k3 = element_stiffness(&t, &c, [0.0; 3], 2).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((k3[i][j] - 3.0 * g[i][j]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn rational_against_high_order_rule() {
        let m = builtin_model("rational").unwrap();
        let u = [0.0, 1.0, -1.0];
        let k2 = element_stiffness(&REF, &m, u, 2).unwrap();
        let k7 = element_stiffness(&REF, &m, u, 7).unwrap();
        let k12 = element_stiffness(&REF, &m, u, 12).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((k2[i][j] - k7[i][j]).abs() < 1e-1);
                assert!((k12[i][j] - k7[i][j]).abs() < 1e-4);
                assert_eq!(k7[i][j], k7[j][i]);
            }
            let row: f64 = k7[i].iter().sum();
            assert!(row.abs() < 1e-13);
        }
    }

    #[test]
    fn interval_element() {
        let unit = builtin_model("unit").unwrap();
        let k = interval_stiffness(0.0, 0.25, &unit, [0.0, 1.0], 2).unwrap();
        for (row, want) in k.iter().zip([[4.0, -4.0], [-4.0, 4.0]]) {
            for (a, b) in row.iter().zip(want) {
                assert!((a - b).abs() < 1e-14);
            }
        }
    }
}
