//! Quadrature on the unit interval and on triangles.
//!
//! All rules are normalised so that the weights sum to one: integrals are
//! `measure * sum_q w_q g(x_q)`.

use std::f64::consts::PI;

/// Gauss-Legendre rule with `n` points on `[0, 1]`, exact for degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let n = n.max(1);
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Map from [-1, 1] to [0, 1]; weights halve.
        points[i] = 0.5 * (1.0 - x);
        points[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    if n % 2 == 1 {
        points[n / 2] = 0.5;
    }
    (points, weights)
}

/// Interval rule exact for polynomials of degree `order`.
pub fn interval_rule(order: usize) -> (Vec<f64>, Vec<f64>) {
    gauss_legendre((order + 2) / 2)
}

/// Triangle rule in barycentric coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleRule {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    pub order: usize,
}

/// Triangle rule exact for degree `order`: the centroid for order 0-1, the
/// three mid-edge points for order 2, and a collapsed Gauss product rule
/// above that.
pub fn triangle_rule(order: usize) -> TriangleRule {
    match order {
        0 | 1 => TriangleRule {
            points: vec![[1.0 / 3.0; 3]],
            weights: vec![1.0],
            order,
        },
        2 => TriangleRule {
            points: vec![[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]],
            weights: vec![1.0 / 3.0; 3],
            order,
        },
        p => {
            // x = u, y = v (1 - u); the Jacobian (1 - u) raises the degree in u by one.
            let n = (p + 2).div_ceil(2);
            let (gp, gw) = gauss_legendre(n);
            let mut points = Vec::with_capacity(n * n);
            let mut weights = Vec::with_capacity(n * n);
            for (&u, &wu) in gp.iter().zip(&gw) {
                for (&v, &wv) in gp.iter().zip(&gw) {
                    let x = u;
                    let y = v * (1.0 - u);
                    points.push([1.0 - x - y, x, y]);
                    weights.push(2.0 * wu * wv * (1.0 - u));
                }
            }
            TriangleRule {
                points,
                weights,
                order,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_exactness() {
        for n in 1..=8 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            for deg in 0..(2 * n) {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                assert!((q - 1.0 / (deg as f64 + 1.0)).abs() < 1e-14, "n={n} deg={deg}");
            }
        }
        let (x, _) = gauss_legendre(2);
        assert!((x[0] - (0.5 - 0.5 / 3f64.sqrt())).abs() < 1e-15);
    }

    /// Exact integral of x^a y^b over the reference triangle: a! b! / (a+b+2)!.
    fn monomial(a: u32, b: u32) -> f64 {
        let f = |k: u32| (1..=k).map(f64::from).product::<f64>();
        f(a) * f(b) / f(a + b + 2)
    }

    #[test]
    fn triangle_exactness() {
        for order in 1..=9 {
            let r = triangle_rule(order);
            assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            for a in 0..=order as u32 {
                for b in 0..=(order as u32 - a) {
                    let q: f64 = r
                        .points
                        .iter()
                        .zip(&r.weights)
                        .map(|(p, w)| 0.5 * w * p[1].powi(a as i32) * p[2].powi(b as i32))
                        .sum();
                    assert!((q - monomial(a, b)).abs() < 1e-15, "order {order} x^{a} y^{b}");
                }
            }
        }
    }
}
