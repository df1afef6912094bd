use serde::Serialize;

use crate::error::{Error, Result};
use crate::fem::FeField;

pub const DEFAULT_COMPARISON_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    /// `min_v (u2(v) - u1(v))`.
    pub min_difference: f64,
    /// Vertices where `u1 > u2 + tolerance`.
    pub violating: Vec<usize>,
    pub ordered: bool,
    pub tolerance: f64,
}

/// Check `u1 <= u2` nodally (equivalent to pointwise for P1 fields).
pub fn compare_fields(u1: &FeField, u2: &FeField, tolerance: f64) -> Result<ComparisonReport> {
    if !u1.same_mesh(u2) {
        return Err(Error::MeshMismatch);
    }
    let mut min_difference = f64::INFINITY;
    let mut violating = Vec::new();
    for (v, (a, b)) in u1.values().iter().zip(u2.values()).enumerate() {
        let d = b - a;
        min_difference = min_difference.min(d);
        if d < -tolerance {
            violating.push(v);
        }
    }
    Ok(ComparisonReport {
        ordered: min_difference >= -tolerance,
        min_difference,
        violating,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{uniform_interval, BoundaryLabel, Mesh};
    use std::sync::Arc;

    fn mesh() -> Arc<Mesh> {
        Arc::new(
            uniform_interval(0.0, 1.0, 3, BoundaryLabel::Dirichlet, BoundaryLabel::Dirichlet)
                .unwrap()
                .into(),
        )
    }

    #[test]
    fn ordering_cases() {
        let m = mesh();
        let u = FeField::from_values(m.clone(), vec![0.0, 0.3, 0.2, 0.0]).unwrap();
        let r = compare_fields(&u, &u, 1e-10).unwrap();
        assert!(r.ordered);
        assert_eq!(r.min_difference, 0.0);

        let up = FeField::from_values(m.clone(), vec![0.0, 1.3, 1.2, 0.0]).unwrap();
        assert!(compare_fields(&u, &up, 1e-10).unwrap().ordered);

        let bump = FeField::from_values(m.clone(), vec![0.0, 0.3 + 1e-3, 0.2, 0.0]).unwrap();
        let r = compare_fields(&bump, &u, 1e-10).unwrap();
        assert!(!r.ordered);
        assert_eq!(r.violating, vec![1]);
    }

    #[test]
    fn mismatch() {
        let other: Arc<Mesh> = Arc::new(
            uniform_interval(0.0, 2.0, 3, BoundaryLabel::Dirichlet, BoundaryLabel::Dirichlet)
                .unwrap()
                .into(),
        );
        let a = FeField::zeros(mesh());
        let b = FeField::zeros(other);
        assert!(matches!(compare_fields(&a, &b, 1e-9), Err(Error::MeshMismatch)));
    }
}
