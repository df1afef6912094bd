use serde::Serialize;

use crate::error::{Error, Result};
use crate::fem::CsrMatrix;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearSolution {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// `||A x - b|| / ||b||` (Euclidean); zero when `b = 0`.
    pub residual: f64,
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn relative_residual(a: &CsrMatrix, x: &[f64], b: &[f64], b_norm: f64) -> f64 {
    let ax = a.mul_vec(x);
    let r: Vec<f64> = ax.iter().zip(b).map(|(p, q)| q - p).collect();
    norm2(&r) / b_norm
}

/// Solve `A x = b` for symmetric positive definite `A`.
///
/// Tridiagonal matrices (1D problems) go through the Thomas algorithm;
/// everything else uses Jacobi-preconditioned conjugate gradients.
pub fn solve_spd(a: &CsrMatrix, b: &[f64], tol: f64, max_iter: usize) -> Result<LinearSolution> {
    let n = b.len();
    assert_eq!(a.n_rows(), n);
    let b_norm = norm2(b);
    if b_norm == 0.0 {
        return Ok(LinearSolution {
            x: vec![0.0; n],
            iterations: 0,
            residual: 0.0,
        });
    }
    if a.is_tridiagonal() {
        if let Some(x) = thomas(a, b) {
            let residual = relative_residual(a, &x, b, b_norm);
            if residual <= tol {
                return Ok(LinearSolution {
                    x,
                    iterations: 1,
                    residual,
                });
            }
            log::debug!("tridiagonal solve residual {residual:e} above {tol:e}; falling back to CG");
        }
    }
    conjugate_gradient(a, b, tol, max_iter)
}

/// Thomas algorithm; `None` on a zero pivot.
pub fn thomas(a: &CsrMatrix, b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut c_prime = vec![0.0; n];
    let mut d_prime = vec![0.0; n];
    for i in 0..n {
        let lower = if i > 0 { a.get(i, i - 1) } else { 0.0 };
        let upper = if i + 1 < n { a.get(i, i + 1) } else { 0.0 };
        let denom = a.get(i, i) - lower * if i > 0 { c_prime[i - 1] } else { 0.0 };
        if denom == 0.0 || !denom.is_finite() {
            return None;
        }
        c_prime[i] = upper / denom;
        d_prime[i] = (b[i] - lower * if i > 0 { d_prime[i - 1] } else { 0.0 }) / denom;
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        x[i] = d_prime[i] - if i + 1 < n { c_prime[i] * x[i + 1] } else { 0.0 };
    }
    Some(x)
}

/// Preconditioned conjugate gradients with the Jacobi preconditioner,
/// stopping on the true relative residual.
pub fn conjugate_gradient(
    a: &CsrMatrix,
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<LinearSolution> {
    let n = b.len();
    let b_norm = norm2(b);
    let inv_diag: Vec<f64> = a
        .diagonal()
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    let mut residual = 1.0;
    for it in 1..=max_iter {
        a.mul_vec_into(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::LinearSolveFailure {
                iterations: it,
                residual,
            });
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        residual = norm2(&r) / b_norm;
        let mut restart = false;
        if residual <= tol {
            // The recursive residual drifts from b - Ax in floating point;
            // confirm, and if it is off, replace it and restart.
            let ax = a.mul_vec(&x);
            for i in 0..n {
                r[i] = b[i] - ax[i];
            }
            residual = norm2(&r) / b_norm;
            if residual <= tol {
                return Ok(LinearSolution {
                    x,
                    iterations: it,
                    residual,
                });
            }
            restart = true;
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = if restart { 0.0 } else { rz_new / rz };
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::LinearSolveFailure {
        iterations: max_iter,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity() {
        let s = solve_spd(&CsrMatrix::identity(3), &[1.0, 2.0, 3.0], 1e-12, 10).unwrap();
        assert_eq!(s.x, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn laplacian_nodal_exact() {
        let h = 0.25;
        let d = vec![
            vec![2.0 / h, -1.0 / h, 0.0],
            vec![-1.0 / h, 2.0 / h, -1.0 / h],
            vec![0.0, -1.0 / h, 2.0 / h],
        ];
        let a = CsrMatrix::from_dense(&d);
        let b = vec![h; 3];
        for x in [
            solve_spd(&a, &b, 1e-12, 100).unwrap().x,
            conjugate_gradient(&a, &b, 1e-12, 100).unwrap().x,
        ] {
            for (xi, e) in x.iter().zip([0.09375, 0.125, 0.09375]) {
                assert!((xi - e).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn random_spd() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 20;
        let m: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                a[i][j] = (0..n).map(|k| m[k][i] * m[k][j]).sum::<f64>() + if i == j { 1.0 } else { 0.0 };
            }
        }
        let a = CsrMatrix::from_dense(&a);
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let s = solve_spd(&a, &b, 1e-12, 1000).unwrap();
        let r = relative_residual(&a, &s.x, &b, norm2(&b));
        assert!(r <= 1e-10);
    }

    #[test]
    fn iteration_cap_reports_failure() {
        let d: Vec<Vec<f64>> = (0..10)
            .map(|i| (0..10).map(|j| if i == j { (i + 1) as f64 } else { 0.1 }).collect())
            .collect();
        let a = CsrMatrix::from_dense(&d);
        let err = conjugate_gradient(&a, &[1.0; 10], 1e-14, 1).unwrap_err();
        assert!(matches!(err, Error::LinearSolveFailure { iterations: 1, .. }));
    }
}
