//! Versioned result files written by `solve` and read by `compare`.

use std::fmt;
use std::path::Path;

use modmvnf_core::nsga2::GenerationStats;
use modmvnf_core::{Chromosome, Gene, Instance, ParetoFront, Problem};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::BenchError;
use crate::metrics::{ObjectiveStats, Pair};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Modmvnf,
    Mopso,
    Exact,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Modmvnf, Algorithm::Mopso, Algorithm::Exact];

    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::Modmvnf => "modmvnf",
            Algorithm::Mopso => "mopso",
            Algorithm::Exact => "exact",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// SHA-256 of the compact JSON form of an instance.
pub fn fingerprint(inst: &Instance) -> String {
    let json = serde_json::to_string(inst).expect("instance serializes");
    hex::encode(Sha256::digest(json.as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceRef {
    pub fingerprint: String,
    /// Generator seed, when the instance carries generator metadata.
    pub generator_seed: Option<u64>,
    pub nodes: usize,
    pub service_graphs: usize,
}

impl InstanceRef {
    pub fn of(inst: &Instance) -> Self {
        InstanceRef {
            fingerprint: fingerprint(inst),
            generator_seed: inst.metadata.as_ref().and_then(|m| m.get("seed")).and_then(|s| s.as_u64()),
            nodes: inst.physical_network.nodes.len(),
            service_graphs: inst.service_graphs.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementRecord {
    pub sg: usize,
    pub decomposition: usize,
    /// Host node id of each NF, in NF order.
    pub hosts: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontEntry {
    pub cost: f64,
    pub latency: f64,
    pub placements: Vec<PlacementRecord>,
}

impl FrontEntry {
    pub fn chromosome(&self, inst: &Instance) -> Result<Chromosome, BenchError> {
        let index = inst.physical_network.index_map();
        let mut genes = Vec::new();
        for p in &self.placements {
            for (nf, id) in p.hosts.iter().enumerate() {
                let host = *index.get(id).ok_or_else(|| BenchError::Invalid(format!("unknown host id {id}")))?;
                genes.push(Gene { host, nf, dec: p.decomposition, sg: p.sg });
            }
        }
        Ok(Chromosome::new(genes))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SfcMean {
    pub sg: usize,
    pub mean_cost: f64,
    pub mean_latency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactSummary {
    pub min_cost: f64,
    pub min_latency: f64,
    pub leaves: u64,
    pub search_space: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentResult {
    pub schema_version: u32,
    pub algorithm: Algorithm,
    pub instance: InstanceRef,
    pub seed: u64,
    pub config: serde_json::Value,
    pub front: Vec<FrontEntry>,
    pub per_sfc: Vec<SfcMean>,
    pub stats: ObjectiveStats,
    pub exact: Option<ExactSummary>,
    pub evaluations: u64,
    pub runtime_ms: Option<f64>,
    pub history: Vec<GenerationStats<f64>>,
}

/// Everything a solver run contributes to a result.
pub struct RunRecord<'a> {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub config: serde_json::Value,
    pub front: &'a ParetoFront,
    pub history: Vec<GenerationStats<f64>>,
    pub evaluations: u64,
    pub runtime_ms: Option<f64>,
    pub exact: Option<ExactSummary>,
}

impl ExperimentResult {
    pub fn build(problem: &Problem, run: RunRecord<'_>) -> Self {
        let inst = problem.instance();
        let ids: Vec<u32> = inst.physical_network.nodes.iter().map(|n| n.id).collect();
        let num_sgs = inst.service_graphs.len();
        let mut sums = vec![(0.0, 0.0); num_sgs];
        let mut front = Vec::with_capacity(run.front.len());
        for pt in run.front.points() {
            for (k, (c, l)) in problem.segment_objectives(&pt.chromosome).enumerate() {
                sums[k].0 += c;
                sums[k].1 += l;
            }
            let placements = pt
                .chromosome
                .segments()
                .map(|seg| PlacementRecord {
                    sg: seg[0].sg,
                    decomposition: seg[0].dec,
                    hosts: seg.iter().map(|g| ids[g.host]).collect(),
                })
                .collect();
            front.push(FrontEntry { cost: pt.cost, latency: pt.latency, placements });
        }
        let n = run.front.len().max(1) as f64;
        let per_sfc = sums
            .into_iter()
            .enumerate()
            .map(|(sg, (c, l))| SfcMean { sg, mean_cost: c / n, mean_latency: l / n })
            .collect();
        let pairs: Vec<Pair> = run.front.objective_pairs();
        ExperimentResult {
            schema_version: SCHEMA_VERSION,
            algorithm: run.algorithm,
            instance: InstanceRef::of(inst),
            seed: run.seed,
            config: run.config,
            front,
            per_sfc,
            stats: ObjectiveStats::of(&pairs).expect("solver fronts are non-empty"),
            exact: run.exact,
            evaluations: run.evaluations,
            runtime_ms: run.runtime_ms,
            history: run.history,
        }
    }

    pub fn pairs(&self) -> Vec<Pair> {
        self.front.iter().map(|e| (e.cost, e.latency)).collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("result serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, BenchError> {
        let r: ExperimentResult = serde_json::from_str(s).map_err(|e| BenchError::Invalid(format!("result file: {e}")))?;
        r.validate().map_err(|v| BenchError::Invalid(v.join("; ")))?;
        Ok(r)
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let s = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        Self::from_json(&s)
    }

    /// Structural and internal-consistency checks of the schema.
    pub fn validate(&self) -> Result<(), Vec<String>> {
        let mut errs = Vec::new();
        if self.schema_version != SCHEMA_VERSION {
            errs.push(format!("schema_version {} (expected {SCHEMA_VERSION})", self.schema_version));
        }
        if self.instance.fingerprint.len() != 64 || !self.instance.fingerprint.bytes().all(|b| b.is_ascii_hexdigit()) {
            errs.push("fingerprint is not a sha256 hex digest".into());
        }
        if self.front.is_empty() {
            errs.push("empty front".into());
        }
        let pairs = self.pairs();
        if pairs.iter().any(|&(c, l)| !(c.is_finite() && l.is_finite() && c >= 0.0 && l >= 0.0)) {
            errs.push("front values must be finite and non-negative".into());
        }
        if pairs.windows(2).any(|w| w[0].0 > w[1].0) {
            errs.push("front not sorted by cost".into());
        }
        for a in &pairs {
            if pairs.iter().any(|b| b.0 <= a.0 && b.1 <= a.1 && (b.0 < a.0 || b.1 < a.1)) {
                errs.push(format!("front point {a:?} is dominated"));
                break;
            }
        }
        for e in &self.front {
            if e.placements.len() != self.instance.service_graphs
                || e.placements.iter().enumerate().any(|(k, p)| p.sg != k || p.hosts.is_empty())
            {
                errs.push("placements must list every service graph once, in order".into());
                break;
            }
        }
        if self.per_sfc.len() != self.instance.service_graphs || self.per_sfc.iter().enumerate().any(|(k, s)| s.sg != k) {
            errs.push("per_sfc must have one entry per service graph".into());
        }
        if let Some(s) = ObjectiveStats::of(&pairs) {
            if s != self.stats {
                errs.push("stats do not match the front".into());
            }
        }
        if self.history.iter().enumerate().any(|(i, h)| h.generation != i) {
            errs.push("history generations must be consecutive from 0".into());
        }
        if self.runtime_ms.is_some_and(|t| !(t.is_finite() && t >= 0.0)) {
            errs.push("runtime_ms must be non-negative".into());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }

    /// Re-evaluates every front entry against the instance.
    pub fn verify_against(&self, problem: &Problem) -> Result<(), BenchError> {
        if fingerprint(problem.instance()) != self.instance.fingerprint {
            return Err(BenchError::Invalid("result was produced for a different instance".into()));
        }
        for e in &self.front {
            let o = problem.evaluate(&e.chromosome(problem.instance())?);
            if !o.feasible || o.cost != e.cost || o.latency != e.latency {
                return Err(BenchError::Invalid(format!("front entry ({}, {}) does not re-evaluate", e.cost, e.latency)));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use modmvnf_core::generator::{generate, Preset};
    use modmvnf_core::nsga2::{self, GaConfig};
    use modmvnf_core::problem::EvalOptions;

    fn sample() -> (Problem, ExperimentResult) {
        let inst: Instance = generate(&Preset::Small10.spec().with_seed(4)).unwrap();
        let p = Problem::new(inst, EvalOptions::default()).unwrap();
        let cfg = GaConfig { generations: 5, ..GaConfig::default() };
        let out = nsga2::run(&p, &cfg).unwrap();
        let r = ExperimentResult::build(
            &p,
            RunRecord {
                algorithm: Algorithm::Modmvnf,
                seed: 0,
                config: serde_json::to_value(&cfg).unwrap(),
                front: &out.front,
                history: out.history.clone(),
                evaluations: out.evaluations,
                runtime_ms: None,
                exact: None,
            },
        );
        (p, r)
    }

    #[test]
    fn round_trip_is_lossless() {
        let (p, r) = sample();
        assert!(r.validate().is_ok());
        let back = ExperimentResult::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), r.to_json());
        back.verify_against(&p).unwrap();
    }

    #[test]
    fn per_sfc_means_sum_to_front_mean() {
        let (_, r) = sample();
        let total: f64 = r.per_sfc.iter().map(|s| s.mean_cost).sum();
        assert!((total - r.stats.mean_cost).abs() <= 1e-9 * r.stats.mean_cost);
    }

    #[test]
    fn tampered_results_are_rejected() {
        let (p, r) = sample();
        let mut bad = r.clone();
        bad.schema_version = 99;
        assert!(bad.validate().is_err());
        let mut bad = r.clone();
        bad.front[0].cost += 1.0;
        assert!(bad.verify_against(&p).is_err());
        let json = r.to_json().replacen("\"seed\"", "\"extra\": 1, \"seed\"", 1);
        assert!(ExperimentResult::from_json(&json).is_err());
    }
}
