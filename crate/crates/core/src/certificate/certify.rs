use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fem::FeField;
use crate::geometry::{check_regularity, Mesh, MeshTopology};

/// A strict inequality `variation < threshold` only counts as satisfied if
/// the margin exceeds a few ulps of the threshold; ties within rounding fail.
const TIE_ULPS: f64 = 4.0;

fn strictly_below(variation: f64, threshold: f64) -> bool {
    let margin = threshold - variation;
    variation < threshold && margin > TIE_ULPS * f64::EPSILON * threshold.abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertificateKind {
    OneD,
    TwoD,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElementCertificate {
    pub element: usize,
    pub variation: f64,
    pub threshold: f64,
    pub margin: f64,
    pub pass: bool,
    /// False for non-acute triangles, where the 2D condition says nothing.
    pub applicable: bool,
    /// 1D only: `|u'|` on the element and the equivalent bound `threshold / h`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub k_alpha: f64,
    pub lipschitz: f64,
    pub elements: Vec<ElementCertificate>,
    pub pass: bool,
    pub n_failing: usize,
    pub n_inapplicable: usize,
}

impl Certificate {
    fn finish(kind: CertificateKind, k_alpha: f64, lipschitz: f64, elements: Vec<ElementCertificate>) -> Self {
        let n_failing = elements.iter().filter(|e| !e.pass).count();
        let n_inapplicable = elements.iter().filter(|e| !e.applicable).count();
        Self {
            kind,
            k_alpha,
            lipschitz,
            pass: n_failing == 0,
            n_failing,
            n_inapplicable,
            elements,
        }
    }

    pub fn failing(&self) -> Vec<usize> {
        self.elements.iter().filter(|e| !e.pass).map(|e| e.element).collect()
    }

    pub fn max_variation(&self) -> f64 {
        self.elements.iter().map(|e| e.variation).fold(0.0, f64::max)
    }

    pub fn min_margin(&self) -> f64 {
        self.elements.iter().map(|e| e.margin).fold(f64::INFINITY, f64::min)
    }

    /// `element_id,variation,threshold,margin,pass` rows followed by a
    /// `#` summary line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "element_id,variation,threshold,margin,pass")?;
        for e in &self.elements {
            writeln!(
                w,
                "{},{:.16e},{:.16e},{:.16e},{}",
                e.element, e.variation, e.threshold, e.margin, e.pass
            )?;
        }
        writeln!(
            w,
            "# pass={} elements={} failing={} inapplicable={} k_alpha={:.16e} lipschitz={:.16e}",
            self.pass,
            self.elements.len(),
            self.n_failing,
            self.n_inapplicable,
            self.k_alpha,
            self.lipschitz
        )?;
        Ok(())
    }
}

fn check_constants(k_alpha: f64, lipschitz: f64) -> Result<()> {
    if !(k_alpha > 0.0 && k_alpha.is_finite() && lipschitz > 0.0 && lipschitz.is_finite()) {
        return Err(Error::InvalidConstants(format!(
            "need k_alpha > 0 and L0 > 0, got k_alpha = {k_alpha}, L0 = {lipschitz}"
        )));
    }
    Ok(())
}

/// Largest nodal difference of `u` over the element's vertices.
pub fn element_variation(u: &FeField, element: usize) -> f64 {
    let vals = u.element_values(element);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    hi - lo
}

/// 1D condition: `|u(a_k) - u(a_{k+1})| < 2 k_alpha / L0` on every element.
pub fn certify_1d(u: &FeField, k_alpha: f64, lipschitz: f64) -> Result<Certificate> {
    check_constants(k_alpha, lipschitz)?;
    let mesh = u
        .mesh()
        .as_interval()
        .ok_or_else(|| Error::InvalidOptions("certify_1d needs an interval mesh".into()))?;
    let threshold = 2.0 * k_alpha / lipschitz;
    let elements = (0..mesh.n_elements())
        .map(|e| {
            let variation = element_variation(u, e);
            let h = mesh.h(e);
            ElementCertificate {
                element: e,
                variation,
                threshold,
                margin: threshold - variation,
                pass: strictly_below(variation, threshold),
                applicable: true,
                slope: Some(variation / h),
                slope_bound: Some(threshold / h),
            }
        })
        .collect();
    Ok(Certificate::finish(CertificateKind::OneD, k_alpha, lipschitz, elements))
}

/// 2D condition per element:
/// `variation_T < 6 k_alpha c_T / (7 L0 gamma_T^{-1} (1 + gamma_T^{-1}))`.
/// Elements with `c_T <= 0` are marked inapplicable and fail.
pub fn certify_2d(u: &FeField, k_alpha: f64, lipschitz: f64) -> Result<Certificate> {
    check_constants(k_alpha, lipschitz)?;
    let mesh = u
        .mesh()
        .as_triangle()
        .ok_or_else(|| Error::InvalidOptions("certify_2d needs a triangle mesh".into()))?;
    let elements = (0..mesh.n_elements())
        .map(|e| {
            let q = mesh.quality(e);
            let gi = 1.0 / q.gamma;
            let threshold = 6.0 * k_alpha * q.c_t / (7.0 * lipschitz * gi * (1.0 + gi));
            let variation = element_variation(u, e);
            let applicable = q.c_t > 0.0;
            ElementCertificate {
                element: e,
                variation,
                threshold,
                margin: threshold - variation,
                pass: applicable && strictly_below(variation, threshold),
                applicable,
                slope: None,
                slope_bound: None,
            }
        })
        .collect();
    Ok(Certificate::finish(CertificateKind::TwoD, k_alpha, lipschitz, elements))
}

/// Dispatch on the mesh dimension.
pub fn certify(u: &FeField, k_alpha: f64, lipschitz: f64) -> Result<Certificate> {
    match **u.mesh() {
        Mesh::Interval(_) => certify_1d(u, k_alpha, lipschitz),
        Mesh::Triangle(_) => certify_2d(u, k_alpha, lipschitz),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlobalCertificate {
    pub pass: bool,
    pub bound: f64,
    pub max_variation: f64,
    pub s_min: f64,
    pub c_min: f64,
    /// False when some triangle has an angle below `t_min` or is not acute.
    pub applicable: bool,
}

/// Mesh-wide sufficient condition
/// `max_T variation_T < (6 k_alpha / 7 L0) s^2 c_min / (1 + s)`, `s = sin(t_min)`.
pub fn certify_2d_global(
    u: &FeField,
    k_alpha: f64,
    lipschitz: f64,
    t_min: f64,
) -> Result<GlobalCertificate> {
    check_constants(k_alpha, lipschitz)?;
    let mesh = u
        .mesh()
        .as_triangle()
        .ok_or_else(|| Error::InvalidOptions("certify_2d_global needs a triangle mesh".into()))?;
    if !(t_min > 0.0 && t_min <= std::f64::consts::FRAC_PI_3) {
        return Err(Error::InvalidConstants(format!(
            "t_min must lie in (0, pi/3], got {t_min}"
        )));
    }
    let report = check_regularity(mesh, t_min);
    let s = t_min.sin();
    let bound = 6.0 * k_alpha / (7.0 * lipschitz) * s * s * report.c_min / (1.0 + s);
    let max_variation = (0..mesh.n_elements())
        .map(|e| element_variation(u, e))
        .fold(0.0, f64::max);
    let applicable = report.is_regular();
    Ok(GlobalCertificate {
        pass: applicable && strictly_below(max_variation, bound),
        bound,
        max_variation,
        s_min: s,
        c_min: report.c_min,
        applicable,
    })
}
