//! Runs one solver on one problem and packages the outcome as a result.

use std::time::Instant;

use modmvnf_core::exact::{exact_pareto, ExactLimits};
use modmvnf_core::mopso::{pso_run, PsoConfig};
use modmvnf_core::nsga2::{self, GaConfig};
use modmvnf_core::Problem;
use serde::{Deserialize, Serialize};

use crate::error::BenchError;
use crate::result::{Algorithm, ExactSummary, ExperimentResult, RunRecord};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings {
    pub ga: GaConfig,
    pub pso: PsoConfig,
    pub exact: ExactLimits,
    /// Record wall-clock runtime in results.
    pub timing: bool,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings { ga: GaConfig::default(), pso: PsoConfig::default(), exact: ExactLimits::default(), timing: true }
    }
}

fn to_value<S: Serialize>(s: &S) -> serde_json::Value {
    serde_json::to_value(s).expect("config serializes")
}

pub fn run_algorithm(problem: &Problem, algorithm: Algorithm, settings: &SolverSettings) -> Result<ExperimentResult, BenchError> {
    let start = Instant::now();
    let elapsed = || settings.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    let result = match algorithm {
        Algorithm::Modmvnf => {
            let out = nsga2::run(problem, &settings.ga)?;
            let runtime_ms = elapsed();
            ExperimentResult::build(
                problem,
                RunRecord {
                    algorithm,
                    seed: settings.ga.seed,
                    config: to_value(&settings.ga),
                    front: &out.front,
                    history: out.history,
                    evaluations: out.evaluations,
                    runtime_ms,
                    exact: None,
                },
            )
        }
        Algorithm::Mopso => {
            let out = pso_run(problem, &settings.pso)?;
            let runtime_ms = elapsed();
            ExperimentResult::build(
                problem,
                RunRecord {
                    algorithm,
                    seed: settings.pso.seed,
                    config: to_value(&settings.pso),
                    front: &out.front,
                    history: out.history,
                    evaluations: out.evaluations,
                    runtime_ms,
                    exact: None,
                },
            )
        }
        Algorithm::Exact => {
            let before = problem.evaluations();
            let out = exact_pareto(problem, &settings.exact)?;
            let runtime_ms = elapsed();
            let summary = ExactSummary {
                min_cost: out.min_cost(),
                min_latency: out.min_latency(),
                leaves: out.leaves,
                search_space: u64::try_from(out.search_space).unwrap_or(u64::MAX),
            };
            ExperimentResult::build(
                problem,
                RunRecord {
                    algorithm,
                    seed: 0,
                    config: to_value(&ExactLimitsEcho::from(&settings.exact)),
                    front: &out.front,
                    history: Vec::new(),
                    evaluations: problem.evaluations() - before + out.leaves,
                    runtime_ms,
                    exact: Some(summary),
                },
            )
        }
    };
    Ok(result)
}

/// JSON-friendly copy of [`ExactLimits`] (the cap is a u128).
#[derive(Debug, Clone, Serialize, Deserialize)]
struct ExactLimitsEcho {
    max_nfs_per_decomposition: usize,
    max_nodes: usize,
    max_total_assignments: u64,
}

impl From<&ExactLimits> for ExactLimitsEcho {
    fn from(l: &ExactLimits) -> Self {
        ExactLimitsEcho {
            max_nfs_per_decomposition: l.max_nfs_per_decomposition,
            max_nodes: l.max_nodes,
            max_total_assignments: u64::try_from(l.max_total_assignments).unwrap_or(u64::MAX),
        }
    }
}
