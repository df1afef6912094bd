//! Element-level check of the two bounds behind the 2D comparison argument.
//!
//! For `w = u1 - u2` with exactly one positive vertex `i` the test function
//! is `phi_i`; with two positive vertices `i, j` it is `phi_i + phi_j`. In
//! both cases, with `k` the vertex where `w` is smallest,
//!
//! ```text
//! int_T kappa(x,u1) grad w . grad v
//!     >= (w_i - w_k) |e_i||e_k| / (4|T|) * k_alpha gamma_T c_T
//! int_T (kappa(x,u2) - kappa(x,u1)) grad u2 . grad v
//!     <= (w_i - w_k) |e_i||e_k| / (4|T|) * (7 L0 / 6)(1 + 1/gamma_T) * var_T(u2)
//! ```
//!
//! where `e_n` is the edge opposite vertex `n`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fem::{basis_gradients, triangle_rule};
use crate::geometry::{triangle_quality, Point};
use crate::models::CoefficientModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SignPattern {
    /// `w_i > 0 >= w_j >= w_k`.
    OnePositive,
    /// `w_i >= w_j > 0 >= w_k`.
    TwoPositive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaCheck {
    pub pattern: SignPattern,
    /// Local vertex indices `[i, j, k]` ordered by decreasing `w`.
    pub order: [usize; 3],
    pub lhs1: f64,
    pub rhs1: f64,
    pub lhs2: f64,
    pub rhs2: f64,
    pub first_holds: bool,
    pub second_holds: bool,
}

impl LemmaCheck {
    pub fn holds(&self) -> bool {
        self.first_holds && self.second_holds
    }
}

/// Classify the sign pattern of `w`; returns the ordering `[i, j, k]`.
pub fn sign_pattern(w: [f64; 3]) -> Result<(SignPattern, [usize; 3])> {
    let mut order = [0, 1, 2];
    order.sort_by(|&a, &b| w[b].total_cmp(&w[a]));
    let [i, j, k] = order;
    if w.iter().any(|x| !x.is_finite()) {
        return Err(Error::InapplicablePattern(w));
    }
    if w[i] > 0.0 && w[j] <= 0.0 {
        Ok((SignPattern::OnePositive, [i, j, k]))
    } else if w[j] > 0.0 && w[k] <= 0.0 {
        Ok((SignPattern::TwoPositive, [i, j, k]))
    } else {
        Err(Error::InapplicablePattern(w))
    }
}

/// Evaluate both sides of both bounds on triangle `t`.
///
/// Integrals use a triangle rule of `quad_order`; since the rule has
/// positive weights the second bound holds for the discrete sums too. An
/// inequality counts as holding when it is violated by at most
/// `eps * max(|lhs|, |rhs|)`.
pub fn verify_lemma_bounds(
    t: &[Point; 3],
    u1: [f64; 3],
    u2: [f64; 3],
    model: &CoefficientModel,
    quad_order: usize,
    eps: f64,
) -> Result<LemmaCheck> {
    let w = [u1[0] - u2[0], u1[1] - u2[1], u1[2] - u2[2]];
    let (pattern, order) = sign_pattern(w)?;
    let [i, j, k] = order;
    let q = triangle_quality(t)?;
    let g = basis_gradients(t)?;

    let mut v = [0.0; 3];
    v[i] = 1.0;
    if pattern == SignPattern::TwoPositive {
        v[j] = 1.0;
    }
    let grad_v = g.gradient_of(v);
    let grad_w = g.gradient_of(w);
    let grad_u2 = g.gradient_of(u2);
    let dot = |a: [f64; 2], b: [f64; 2]| a[0] * b[0] + a[1] * b[1];

    let rule = triangle_rule(quad_order);
    let mut mean_k1 = 0.0;
    let mut mean_dk = 0.0;
    for (b, wq) in rule.points.iter().zip(&rule.weights) {
        let x = [
            b[0] * t[0][0] + b[1] * t[1][0] + b[2] * t[2][0],
            b[0] * t[0][1] + b[1] * t[1][1] + b[2] * t[2][1],
        ];
        let s1 = b[0] * u1[0] + b[1] * u1[1] + b[2] * u1[2];
        let s2 = b[0] * u2[0] + b[1] * u2[1] + b[2] * u2[2];
        let k1 = model.checked_eval(x, s1)?;
        let k2 = model.checked_eval(x, s2)?;
        mean_k1 += wq * k1;
        mean_dk += wq * (k2 - k1);
    }
    let lhs1 = g.area * mean_k1 * dot(grad_w, grad_v);
    let lhs2 = g.area * mean_dk * dot(grad_u2, grad_v);

    let common = (w[i] - w[k]) * q.edges[i] * q.edges[k] / (4.0 * q.area);
    let gi = 1.0 / q.gamma;
    let var_u2 = u2.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - u2.iter().copied().fold(f64::INFINITY, f64::min);
    let rhs1 = common * model.k_alpha() * q.gamma * q.c_t;
    let rhs2 = common * 7.0 * model.lipschitz() / 6.0 * (1.0 + gi) * var_u2;

    let slack = |a: f64, b: f64| eps * a.abs().max(b.abs());
    Ok(LemmaCheck {
        pattern,
        order,
        lhs1,
        rhs1,
        lhs2,
        rhs2,
        first_holds: lhs1 >= rhs1 - slack(lhs1, rhs1),
        second_holds: lhs2 <= rhs2 + slack(lhs2, rhs2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::builtin_model;

    const EQ: [Point; 3] = [[0.0, 0.0], [1.0, 0.0], [0.5, 0.866_025_403_784_438_6]];

    #[test]
    fn patterns() {
        assert_eq!(sign_pattern([1.0, -1.0, 0.0]).unwrap(), (SignPattern::OnePositive, [0, 2, 1]));
        assert_eq!(sign_pattern([0.5, 0.0, 0.0]).unwrap().0, SignPattern::OnePositive);
        assert_eq!(sign_pattern([0.5, 0.2, -0.1]).unwrap(), (SignPattern::TwoPositive, [0, 1, 2]));
        assert!(matches!(sign_pattern([1.0, 1.0, 1.0]), Err(Error::InapplicablePattern(_))));
        assert!(matches!(sign_pattern([0.0, -1.0, 0.0]), Err(Error::InapplicablePattern(_))));
    }

    #[test]
    fn constant_coefficient_has_zero_second_lhs() {
        let m = CoefficientModel::new("c", 1.0, 1.0, 1.0, |_, _| 1.0).unwrap();
        let c = verify_lemma_bounds(&EQ, [1.0, 0.2, 0.1], [0.0, 0.2, 0.1], &m, 4, 1e-12).unwrap();
        assert_eq!(c.lhs2, 0.0);
        // w = phi_0: lhs1 = int |grad phi_0|^2 = |e_0|^2 / (4|T|) = 1/sqrt(3).
        assert!((c.lhs1 - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!(c.holds());
    }

    #[test]
    fn two_positive_case_holds() {
        let m = builtin_model("atan").unwrap();
        let c = verify_lemma_bounds(&EQ, [0.9, 0.6, -0.3], [0.1, 0.4, 0.2], &m, 6, 1e-12).unwrap();
        assert_eq!(c.pattern, SignPattern::TwoPositive);
        assert!(c.holds(), "{c:?}");
    }
}
