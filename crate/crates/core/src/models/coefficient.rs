use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::Point;

pub type KappaFn = Arc<dyn Fn(Point, f64) -> f64 + Send + Sync>;

/// A coefficient `kappa(x, s)` together with the constants the certificate
/// relies on: `k_alpha <= kappa <= k_beta` and a Lipschitz constant in `s`.
///
/// The constants are taken on trust from whoever builds the model; use
/// [`estimate_lipschitz`] to sanity-check them.
#[derive(Clone)]
pub struct CoefficientModel {
    id: String,
    eval: KappaFn,
    /// `d kappa / d s`, when known in closed form (used by manufactured problems).
    ds: Option<KappaFn>,
    k_alpha: f64,
    k_beta: f64,
    lipschitz: f64,
}

impl fmt::Debug for CoefficientModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientModel")
            .field("id", &self.id)
            .field("k_alpha", &self.k_alpha)
            .field("k_beta", &self.k_beta)
            .field("lipschitz", &self.lipschitz)
            .finish()
    }
}

impl CoefficientModel {
    pub fn new(
        id: impl Into<String>,
        k_alpha: f64,
        k_beta: f64,
        lipschitz: f64,
        eval: impl Fn(Point, f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(k_alpha > 0.0 && k_beta >= k_alpha && k_beta.is_finite()) {
            return Err(Error::InvalidConstants(format!(
                "need 0 < k_alpha <= k_beta < inf, got k_alpha = {k_alpha}, k_beta = {k_beta}"
            )));
        }
        if !(lipschitz > 0.0 && lipschitz.is_finite()) {
            return Err(Error::InvalidConstants(format!(
                "Lipschitz constant must be positive and finite, got {lipschitz}"
            )));
        }
        Ok(Self {
            id: id.into(),
            eval: Arc::new(eval),
            ds: None,
            k_alpha,
            k_beta,
            lipschitz,
        })
    }

    pub fn with_derivative(
        mut self,
        ds: impl Fn(Point, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.ds = Some(Arc::new(ds));
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn k_alpha(&self) -> f64 {
        self.k_alpha
    }

    pub fn k_beta(&self) -> f64 {
        self.k_beta
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn eval(&self, x: Point, s: f64) -> f64 {
        (self.eval)(x, s)
    }

    pub fn ds(&self, x: Point, s: f64) -> Option<f64> {
        self.ds.as_ref().map(|d| d(x, s))
    }

    /// Evaluate and check the value against `[k_alpha, k_beta]`.
    ///
    /// The interval is closed: several builtins attain their bound (e.g.
    /// `rational` reaches 1.5 at `s = -1`).
    pub fn checked_eval(&self, x: Point, s: f64) -> Result<f64> {
        let value = self.eval(x, s);
        if !(value >= self.k_alpha && value <= self.k_beta) {
            return Err(Error::CoefficientBoundsViolation {
                x,
                s,
                value,
                k_alpha: self.k_alpha,
                k_beta: self.k_beta,
            });
        }
        Ok(value)
    }
}

/// Builtin models by id: `unit`, `atan`, `rational`, `steep(L)`.
pub fn builtin_model(id: &str) -> Result<CoefficientModel> {
    let id = id.trim();
    match id {
        "unit" => Ok(CoefficientModel::new("unit", 0.5, 1.5, 1.0, |_, _| 1.0)?
            .with_derivative(|_, _| 0.0)),
        "atan" => Ok(
            CoefficientModel::new("atan", 1.0, 3.0, 2.0 / PI, |_, s| 2.0 + 2.0 / PI * s.atan())?
                .with_derivative(|_, s| 2.0 / PI / (1.0 + s * s)),
        ),
        "rational" => Ok(
            CoefficientModel::new("rational", 1.5, 2.5, 1.0, |_, s| 2.0 + s / (1.0 + s * s))?
                .with_derivative(|_, s| {
                    let d = 1.0 + s * s;
                    (1.0 - s * s) / (d * d)
                }),
        ),
        _ => {
            let arg = id
                .strip_prefix("steep(")
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| Error::UnknownModel(id.to_owned()))?;
            let l: f64 = arg
                .trim()
                .parse()
                .map_err(|_| Error::UnknownModel(id.to_owned()))?;
            steep_model(l)
        }
    }
}

/// `kappa = 1 + 1/(1 + (c s)^2)` with `c` chosen so that the Lipschitz
/// constant is exactly `l`: the derivative peaks at `s = 1/(c sqrt 3)` with
/// magnitude `9c / (8 sqrt 3)`.
pub fn steep_model(l: f64) -> Result<CoefficientModel> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::InvalidConstants(format!(
            "steep model needs L > 0, got {l}"
        )));
    }
    let c = l * 8.0 * 3f64.sqrt() / 9.0;
    Ok(CoefficientModel::new(format!("steep({l})"), 1.0, 2.0, l, move |_, s| {
        1.0 + 1.0 / (1.0 + (c * s) * (c * s))
    })?
    .with_derivative(move |_, s| {
        let d = 1.0 + (c * s) * (c * s);
        -2.0 * c * c * s / (d * d)
    }))
}

/// `kappa = base + amp * (2/pi) * atan(rate * (s - shift))`.
///
/// Values lie strictly inside `(base - amp, base + amp)`; the Lipschitz
/// constant is `2 amp rate / pi`.
pub fn scaled_atan(base: f64, amp: f64, rate: f64, shift: f64) -> Result<CoefficientModel> {
    if !(amp > 0.0 && rate > 0.0 && base > amp) {
        return Err(Error::InvalidConstants(format!(
            "scaled atan needs base > amp > 0 and rate > 0 (base {base}, amp {amp}, rate {rate})"
        )));
    }
    let id = format!("scaled_atan({base},{amp},{rate},{shift})");
    Ok(CoefficientModel::new(id, base - amp, base + amp, 2.0 * amp * rate / PI, move |_, s| {
        base + amp * 2.0 / PI * (rate * (s - shift)).atan()
    })?
    .with_derivative(move |_, s| {
        let t = rate * (s - shift);
        amp * 2.0 / PI * rate / (1.0 + t * t)
    }))
}

/// Sampled (non-certified) constants of a coefficient.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LipschitzEstimate {
    /// Largest difference quotient between neighbouring samples. This is a
    /// lower bound on the true constant.
    pub lipschitz: f64,
    pub k_alpha: f64,
    pub k_beta: f64,
}

/// Sample `kappa(x, .)` on `n` equispaced points of `s_range` for each `x`.
pub fn estimate_lipschitz(
    kappa: impl Fn(Point, f64) -> f64,
    xs: &[Point],
    s_range: (f64, f64),
    n: usize,
) -> Result<LipschitzEstimate> {
    if n < 2 {
        return Err(Error::InvalidOptions(format!("need n >= 2 samples, got {n}")));
    }
    if xs.is_empty() {
        return Err(Error::InvalidOptions("need at least one x sample".into()));
    }
    let (lo, hi) = s_range;
    let step = (hi - lo) / (n - 1) as f64;
    let mut est = LipschitzEstimate {
        lipschitz: 0.0,
        k_alpha: f64::INFINITY,
        k_beta: f64::NEG_INFINITY,
    };
    for &x in xs {
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..n {
            let s = if i + 1 == n { hi } else { lo + step * i as f64 };
            let v = kappa(x, s);
            est.k_alpha = est.k_alpha.min(v);
            est.k_beta = est.k_beta.max(v);
            if let Some((sp, vp)) = prev {
                est.lipschitz = est.lipschitz.max((v - vp).abs() / (s - sp));
            }
            prev = Some((s, v));
        }
    }
    Ok(est)
}
