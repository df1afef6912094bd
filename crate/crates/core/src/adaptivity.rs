//! Solve, certify, refine where the certificate fails, repeat.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::certificate::{certify, Certificate};
use crate::error::{Error, Result};
use crate::fem::FeField;
use crate::geometry::{Mesh, MeshTopology};
use crate::models::ProblemSpec;
use crate::solver::{picard_solve, SolveReport, SolverOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum MarkingStrategy {
    AllViolating,
    /// The `ceil(theta * #failing)` failing elements with the smallest margins.
    WorstFraction(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdaptiveOptions {
    /// Maximum number of solve/certify rounds.
    pub max_rounds: usize,
    pub strategy: MarkingStrategy,
    /// Refinement stops once it would produce more elements than this.
    pub element_budget: usize,
    pub solver: SolverOptions,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            max_rounds: 20,
            strategy: MarkingStrategy::AllViolating,
            element_budget: 1_000_000,
            solver: SolverOptions::default(),
        }
    }
}

/// Elements to refine. Strategy parameters are validated by [`adaptive_certify`];
/// here a `theta` outside `(0, 1]` is clamped.
pub fn mark(cert: &Certificate, strategy: MarkingStrategy) -> Vec<usize> {
    let mut failing: Vec<_> = cert.elements.iter().filter(|e| !e.pass).collect();
    match strategy {
        MarkingStrategy::AllViolating => failing.iter().map(|e| e.element).collect(),
        MarkingStrategy::WorstFraction(theta) => {
            let theta = theta.clamp(0.0, 1.0);
            let n = (theta * failing.len() as f64).ceil() as usize;
            failing.sort_by(|a, b| a.margin.total_cmp(&b.margin).then(a.element.cmp(&b.element)));
            let mut out: Vec<usize> = failing.iter().take(n).map(|e| e.element).collect();
            out.sort_unstable();
            out
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum AdaptiveStatus {
    Certified,
    BudgetExceeded,
    RoundsExhausted,
    SolveFailed,
    /// Refinement produced non-acute triangles (listed by index in the refined mesh).
    RegularityLost { elements: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundRecord {
    pub round: usize,
    pub n_elements: usize,
    pub n_vertices: usize,
    pub n_failing: usize,
    pub max_variation: f64,
    pub min_margin: f64,
    pub n_marked: usize,
    /// Initial elements with at least one refined descendant, after this round.
    pub refined_roots: usize,
    pub solve: SolveReport,
}

#[derive(Debug, Clone)]
pub struct CertifiedSolution {
    pub status: AdaptiveStatus,
    /// Converged field of the last round, or the last iterate if that solve failed.
    pub field: FeField,
    /// Certificate of `field`; `None` if the last solve failed.
    pub certificate: Option<Certificate>,
    pub history: Vec<RoundRecord>,
    pub initial_elements: usize,
    /// Initial element containing each element of the final mesh.
    pub roots: Vec<usize>,
    /// Sorted initial elements that were ever refined.
    pub refined_roots: Vec<usize>,
}

impl CertifiedSolution {
    pub fn is_certified(&self) -> bool {
        self.status == AdaptiveStatus::Certified
    }

    pub fn refined_fraction(&self) -> f64 {
        self.refined_roots.len() as f64 / self.initial_elements as f64
    }
}

fn non_acute(mesh: &Mesh) -> Vec<usize> {
    match mesh {
        Mesh::Interval(_) => Vec::new(),
        Mesh::Triangle(m) => (0..m.n_elements()).filter(|&e| !m.quality(e).acute).collect(),
    }
}

pub fn adaptive_certify(problem: &ProblemSpec, opts: &AdaptiveOptions) -> Result<CertifiedSolution> {
    let initial_elements = problem.mesh.n_elements();
    if opts.max_rounds == 0 {
        return Err(Error::InvalidOptions("max_rounds must be at least 1".into()));
    }
    if opts.element_budget < initial_elements {
        return Err(Error::InvalidOptions(format!(
            "element budget {} is below the initial element count {initial_elements}",
            opts.element_budget
        )));
    }
    if let MarkingStrategy::WorstFraction(theta) = opts.strategy {
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(Error::InvalidOptions(format!("theta must lie in (0, 1], got {theta}")));
        }
    }
    opts.solver.validate()?;
    let bad = non_acute(&problem.mesh);
    if !bad.is_empty() {
        return Err(Error::InvalidMesh(format!(
            "initial mesh has {} non-acute triangles (first: {})",
            bad.len(),
            bad[0]
        )));
    }

    let mut current = problem.clone();
    let mut roots: Vec<usize> = (0..initial_elements).collect();
    let mut refined_roots = BTreeSet::new();
    let mut history = Vec::new();
    let mut warm: Option<FeField> = None;

    for round in 1..=opts.max_rounds {
        let (field, report) = match picard_solve(&current, &opts.solver, warm.as_ref()) {
            Ok(ok) => ok,
            Err(Error::NonlinearSolveFailure(f)) => {
                log::warn!("round {round}: solve failed after {} iterations", f.report.iterations);
                return Ok(CertifiedSolution {
                    status: AdaptiveStatus::SolveFailed,
                    field: f.last_iterate,
                    certificate: None,
                    history,
                    initial_elements,
                    roots,
                    refined_roots: refined_roots.into_iter().collect(),
                });
            }
            Err(e) => return Err(e),
        };
        let cert = certify(&field, current.model.k_alpha(), current.model.lipschitz())?;
        let marked = if cert.pass { Vec::new() } else { mark(&cert, opts.strategy) };
        let mut record = RoundRecord {
            round,
            n_elements: current.mesh.n_elements(),
            n_vertices: current.mesh.n_vertices(),
            n_failing: cert.n_failing,
            max_variation: cert.max_variation(),
            min_margin: cert.min_margin(),
            n_marked: marked.len(),
            refined_roots: refined_roots.len(),
            solve: report,
        };
        log::info!(
            "round {round}: {} elements, {} failing, max variation {:e}",
            record.n_elements,
            record.n_failing,
            record.max_variation
        );

        let finish = |status, record, history: &mut Vec<RoundRecord>, roots, refined: &BTreeSet<usize>| {
            history.push(record);
            CertifiedSolution {
                status,
                field: field.clone(),
                certificate: Some(cert.clone()),
                history: std::mem::take(history),
                initial_elements,
                roots,
                refined_roots: refined.iter().copied().collect(),
            }
        };
        if cert.pass {
            return Ok(finish(AdaptiveStatus::Certified, record, &mut history, roots, &refined_roots));
        }
        if round == opts.max_rounds {
            return Ok(finish(AdaptiveStatus::RoundsExhausted, record, &mut history, roots, &refined_roots));
        }

        let refinement = current.mesh.refine(&marked)?;
        if refinement.mesh.n_elements() > opts.element_budget {
            return Ok(finish(AdaptiveStatus::BudgetExceeded, record, &mut history, roots, &refined_roots));
        }
        // The rejected refinement is not applied: field, roots and counts
        // stay those of the current mesh.
        let bad = non_acute(&refinement.mesh);
        if !bad.is_empty() {
            return Ok(finish(
                AdaptiveStatus::RegularityLost { elements: bad },
                record,
                &mut history,
                roots,
                &refined_roots,
            ));
        }
        let mut children = vec![0usize; current.mesh.n_elements()];
        for &p in &refinement.parent {
            children[p] += 1;
        }
        for (e, &c) in children.iter().enumerate() {
            if c > 1 {
                refined_roots.insert(roots[e]);
            }
        }
        record.refined_roots = refined_roots.len();
        let new_roots: Vec<usize> = refinement.parent.iter().map(|&p| roots[p]).collect();

        history.push(record);
        let prolonged = refinement.prolong(field.values());
        current = current.with_mesh(refinement.mesh);
        warm = Some(FeField::from_values(current.mesh.clone(), prolonged)?);
        roots = new_roots;
    }
    unreachable!("the last round always returns")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::{CertificateKind, ElementCertificate};
    use crate::models::{affine_1d, builtin_problem};

    fn cert_with_margins(margins: &[(f64, bool)]) -> Certificate {
        let elements: Vec<_> = margins
            .iter()
            .enumerate()
            .map(|(i, &(m, pass))| ElementCertificate {
                element: i,
                variation: 1.0 - m,
                threshold: 1.0,
                margin: m,
                pass,
                applicable: true,
                slope: None,
                slope_bound: None,
            })
            .collect();
        let n_failing = elements.iter().filter(|e| !e.pass).count();
        Certificate {
            kind: CertificateKind::OneD,
            k_alpha: 1.0,
            lipschitz: 1.0,
            pass: n_failing == 0,
            n_failing,
            n_inapplicable: 0,
            elements,
        }
    }

    #[test]
    fn marking_rules() {
        let all_pass = cert_with_margins(&[(0.5, true), (0.2, true)]);
        assert!(mark(&all_pass, MarkingStrategy::AllViolating).is_empty());

        let c = cert_with_margins(&[(-0.1, false), (0.3, true), (-0.5, false), (-0.2, false)]);
        assert_eq!(mark(&c, MarkingStrategy::AllViolating), vec![0, 2, 3]);
        assert_eq!(mark(&c, MarkingStrategy::WorstFraction(0.34)), vec![2, 3]);

        let ties = cert_with_margins(&[(0.0, true), (-0.1, false), (-0.1, false), (-0.1, false)]);
        assert_eq!(mark(&ties, MarkingStrategy::WorstFraction(0.5)), vec![1, 2]);
    }

    #[test]
    fn already_certified_is_one_round() {
        let p = affine_1d(4).unwrap();
        let s = adaptive_certify(&p, &AdaptiveOptions::default()).unwrap();
        assert!(s.is_certified());
        assert_eq!(s.history.len(), 1);
        assert!(s.refined_roots.is_empty());
    }

    #[test]
    fn budget_at_initial_count() {
        let p = builtin_problem("steep").unwrap();
        let n = p.mesh.n_elements();
        let opts = AdaptiveOptions {
            element_budget: n,
            ..Default::default()
        };
        let s = adaptive_certify(&p, &opts).unwrap();
        assert_eq!(s.status, AdaptiveStatus::BudgetExceeded);
        assert!(s.certificate.as_ref().is_some_and(|c| !c.pass));
    }

    #[test]
    fn invalid_options() {
        let p = affine_1d(4).unwrap();
        let zero = AdaptiveOptions {
            max_rounds: 0,
            ..Default::default()
        };
        assert!(matches!(adaptive_certify(&p, &zero), Err(Error::InvalidOptions(_))));
        let theta = AdaptiveOptions {
            strategy: MarkingStrategy::WorstFraction(0.0),
            ..Default::default()
        };
        assert!(matches!(adaptive_certify(&p, &theta), Err(Error::InvalidOptions(_))));
    }
}
