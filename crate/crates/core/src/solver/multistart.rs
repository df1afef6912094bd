//! Nonuniqueness probe: solve from many random initial fields and group the
//! converged solutions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::picard::{picard_solve, SolveReport, SolverOptions};
use crate::error::{Error, NonlinearFailure, Result};
use crate::fem::FeField;
use crate::geometry::MeshTopology;
use crate::models::ProblemSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MultiStartOptions {
    pub n_starts: usize,
    pub seed: u64,
    /// Initial values at free vertices are uniform in this range.
    pub range: (f64, f64),
    /// Solutions closer than this in max nodal distance are the same.
    pub distinct_tol: f64,
}

impl Default for MultiStartOptions {
    fn default() -> Self {
        Self {
            n_starts: 10,
            seed: 2024,
            range: (-2.0, 2.0),
            distinct_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolutionCluster {
    pub representative: FeField,
    /// Indices of the starts that converged into this cluster.
    pub members: Vec<usize>,
    /// Largest max-nodal distance between two members.
    pub diameter: f64,
}

#[derive(Debug, Clone)]
pub struct MultiStartResult {
    pub clusters: Vec<SolutionCluster>,
    /// Per start: the report, or `None` if the solve errored before producing one.
    pub reports: Vec<Option<SolveReport>>,
    pub failures: usize,
}

/// Initial field of start `index`: its own ChaCha stream of `seed`.
pub fn random_start(problem: &ProblemSpec, opts: &MultiStartOptions, index: usize) -> FeField {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(index as u64);
    let mesh = problem.mesh.clone();
    let (lo, hi) = opts.range;
    let values = (0..mesh.n_vertices())
        .map(|v| {
            let r = rng.gen_range(lo..=hi);
            if mesh.is_dirichlet(v) {
                (problem.dirichlet)(mesh.vertex(v))
            } else {
                r
            }
        })
        .collect();
    FeField::from_values(mesh, values).expect("length matches mesh")
}

pub fn multi_start(
    problem: &ProblemSpec,
    solver: &SolverOptions,
    opts: &MultiStartOptions,
) -> Result<MultiStartResult> {
    if opts.n_starts == 0 {
        return Err(Error::InvalidOptions("n_starts must be at least 1".into()));
    }
    if !(opts.range.0 <= opts.range.1) || !(opts.distinct_tol > 0.0) {
        return Err(Error::InvalidOptions(format!(
            "need range.0 <= range.1 and distinct_tol > 0 (got {:?}, {})",
            opts.range, opts.distinct_tol
        )));
    }
    let outcomes: Vec<Result<(FeField, SolveReport)>> = (0..opts.n_starts)
        .into_par_iter()
        .map(|i| {
            let u0 = random_start(problem, opts, i);
            picard_solve(problem, solver, Some(&u0))
        })
        .collect();

    let mut clusters: Vec<SolutionCluster> = Vec::new();
    let mut members_fields: Vec<Vec<FeField>> = Vec::new();
    let mut reports = Vec::with_capacity(outcomes.len());
    let mut failures = 0;
    let mut last_failure: Option<Error> = None;
    for (i, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok((u, rep)) => {
                reports.push(Some(rep));
                let hit = clusters
                    .iter()
                    .position(|c| c.representative.max_abs_diff(&u).unwrap() <= opts.distinct_tol);
                match hit {
                    Some(k) => {
                        for other in &members_fields[k] {
                            let d = other.max_abs_diff(&u).unwrap();
                            clusters[k].diameter = clusters[k].diameter.max(d);
                        }
                        clusters[k].members.push(i);
                        members_fields[k].push(u);
                    }
                    None => {
                        clusters.push(SolutionCluster {
                            representative: u.clone(),
                            members: vec![i],
                            diameter: 0.0,
                        });
                        members_fields.push(vec![u]);
                    }
                }
            }
            Err(e) => {
                failures += 1;
                log::warn!("start {i} failed: {e}");
                reports.push(match &e {
                    Error::NonlinearSolveFailure(f) => Some(f.report.clone()),
                    _ => None,
                });
                last_failure = Some(e);
            }
        }
    }
    if clusters.is_empty() {
        return Err(match last_failure {
            Some(e @ Error::NonlinearSolveFailure(_)) => e,
            Some(other) => {
                log::warn!("all starts failed; last error: {other}");
                Error::NonlinearSolveFailure(Box::new(NonlinearFailure {
                    last_iterate: FeField::zeros(problem.mesh.clone()),
                    report: SolveReport {
                        iterations: 0,
                        changes: vec![],
                        damping: vec![],
                        final_linear_residual: f64::NAN,
                        final_residual: None,
                        converged: false,
                    },
                }))
            }
            None => unreachable!("n_starts >= 1"),
        });
    }
    Ok(MultiStartResult {
        clusters,
        reports,
        failures,
    })
}
