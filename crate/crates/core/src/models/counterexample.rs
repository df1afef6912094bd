//! Threshold arithmetic for the known nonuniqueness constructions.
//!
//! Both constructions have a coefficient bounded below by `k` and a discrete
//! solution with nodal value `u1` next to a zero boundary value, so the
//! relevant element variation is `u1`. The Lipschitz constant the coefficient
//! must have is bounded below by a secant slope; plugging that bound into
//! the certificate gives a threshold that never exceeds `u1`.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleAnalysis {
    pub dim: usize,
    pub k: f64,
    pub u1: f64,
    pub k_alpha: f64,
    /// Lower bound on the Lipschitz constant used for `threshold`.
    pub lipschitz_bound: f64,
    /// Certificate threshold `2 k / L0` (1D) or the equilateral bound (2D).
    pub threshold: f64,
    pub threshold_ratio: f64,
    pub violated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub one_d: Option<OneDConstruction>,
}

/// Extra 1D quantities from the general-`k` construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneDConstruction {
    /// Lipschitz bound from the straight secant `(1 - k)/u1`; equals
    /// `(2/3)/u1` at `k = 1/3`.
    pub secant_lipschitz_bound: f64,
    /// `2 k / L0` with the straight-secant bound.
    pub secant_threshold: f64,
    /// Slope bound `(1-k)^2 / (1-2k)` of the kinked profile.
    pub slope_bound: f64,
    /// Kink slope `s = -(1-k)^2/(1-2k)`.
    pub s: f64,
    /// `2k(1-2k)/(1-k)^2`, consistent with `slope_bound`.
    pub ratio_square_denominator: f64,
    /// `2k(1-2k)/(1-k^2)`, the alternative denominator.
    pub ratio_difference_denominator: f64,
}

fn check(k: f64, u1: f64) -> Result<()> {
    if !(k > 0.0 && k < 0.5) {
        return Err(Error::InvalidConstants(format!("k must lie in (0, 1/2), got {k}")));
    }
    if !(u1 > 0.0 && u1.is_finite()) {
        return Err(Error::InvalidConstants(format!("u1 must be positive, got {u1}")));
    }
    Ok(())
}

pub fn counterexample_1d(k: f64, u1: f64) -> Result<CounterexampleAnalysis> {
    check(k, u1)?;
    let slope_bound = (1.0 - k) * (1.0 - k) / (1.0 - 2.0 * k);
    let lipschitz_bound = slope_bound / u1;
    let threshold = 2.0 * k / lipschitz_bound;
    let secant_lipschitz_bound = (1.0 - k) / u1;
    let construction = OneDConstruction {
        secant_lipschitz_bound,
        secant_threshold: 2.0 * k / secant_lipschitz_bound,
        slope_bound,
        s: -slope_bound,
        ratio_square_denominator: 2.0 * k * (1.0 - 2.0 * k) / ((1.0 - k) * (1.0 - k)),
        ratio_difference_denominator: 2.0 * k * (1.0 - 2.0 * k) / (1.0 - k * k),
    };
    Ok(CounterexampleAnalysis {
        dim: 1,
        k,
        u1,
        k_alpha: k,
        lipschitz_bound,
        threshold,
        threshold_ratio: threshold / u1,
        violated: threshold <= u1,
        one_d: Some(construction),
    })
}

/// Equilateral-mesh construction: the coefficient drops from 1 to `k` over
/// the height `sqrt(3)/2` of a unit triangle, a secant slope of
/// `2(1-k)/sqrt 3`, which scaled by the solution gives `L0 >= (1-k)/u1`.
pub fn counterexample_2d(k: f64, u1: f64) -> Result<CounterexampleAnalysis> {
    check(k, u1)?;
    let lipschitz_bound = (1.0 - k) / u1;
    // gamma = 1, c = 1/2: 6 k c / (7 L0 * 1 * 2) = 3k / (14 L0).
    let threshold = 3.0 * k / (14.0 * lipschitz_bound);
    Ok(CounterexampleAnalysis {
        dim: 2,
        k,
        u1,
        k_alpha: k,
        lipschitz_bound,
        threshold,
        threshold_ratio: threshold / u1,
        violated: threshold <= u1,
        one_d: None,
    })
}
