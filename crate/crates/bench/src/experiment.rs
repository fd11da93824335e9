//! Seeded experiment suite: K generated instances, every algorithm on each,
//! GA and PSO at matched evaluation budgets, aggregated into one report.
//!
//! Seeds: run `r` of a suite seeded with `s` uses `derive_seed(s, 3r)` for the
//! instance, `derive_seed(s, 3r + 1)` for MODMVNF and `derive_seed(s, 3r + 2)`
//! for MOPSO.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use modmvnf_core::generator::{generate, GeneratorSpec, Preset, UnitCostModel};
use modmvnf_core::problem::EvalOptions;
use modmvnf_core::rng::derive_seed;
use modmvnf_core::{Instance, Problem};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::BenchError;
use crate::figures::{cdf_rows, validate_cdf, write_csv, CdfRow};
use crate::metrics::{coverage, hypervolume_2d, mean_std, reference_point, Pair};
use crate::result::{fingerprint, Algorithm, ExperimentResult, SCHEMA_VERSION};
use crate::runner::{run_algorithm, SolverSettings};

pub const THREADS_ENV: &str = "MODMVNF_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub preset: Preset,
    pub runs: usize,
    pub seed: u64,
    /// Overrides the preset's unit cost model.
    pub unit_costs: Option<UnitCostModel>,
    pub settings: SolverSettings,
    pub include_exact: bool,
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(preset: Preset, runs: usize, seed: u64) -> Self {
        ExperimentConfig {
            preset,
            runs,
            seed,
            unit_costs: None,
            settings: SolverSettings::default(),
            include_exact: true,
            threads: None,
        }
    }

    pub fn instance_spec(&self, run: usize) -> GeneratorSpec {
        let mut spec = self.preset.spec().with_seed(derive_seed(self.seed, 3 * run as u64));
        if let Some(u) = self.unit_costs {
            spec.unit_costs = u;
        }
        spec
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub algorithm: Algorithm,
    pub error: Option<String>,
    pub result: Option<ExperimentResult>,
}

impl Entry {
    pub fn ok(&self) -> bool {
        self.result.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunMetrics {
    pub reference_point: Option<Pair>,
    pub hypervolume: BTreeMap<Algorithm, f64>,
    /// C(modmvnf, mopso) and C(mopso, modmvnf).
    pub coverage_ga_pso: Option<f64>,
    pub coverage_pso_ga: Option<f64>,
    /// hv(modmvnf) / hv(exact); 1 when the exact hypervolume is zero.
    pub ga_hv_ratio_to_exact: Option<f64>,
    pub ga_beats_pso: Option<bool>,
    /// GA evaluations minus PSO evaluations.
    pub evaluation_gap: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunEntry {
    pub run: usize,
    pub instance_seed: u64,
    pub fingerprint: String,
    pub entries: Vec<Entry>,
    pub metrics: RunMetrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

impl MeanStd {
    fn of(values: &[f64]) -> Option<Self> {
        mean_std(values).map(|(mean, std)| MeanStd { mean, std, n: values.len() })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSummary {
    pub completed: usize,
    pub failed: usize,
    pub hypervolume: Option<MeanStd>,
    pub front_size: Option<MeanStd>,
    pub mean_cost: Option<MeanStd>,
    pub mean_latency: Option<MeanStd>,
    pub evaluations: Option<MeanStd>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub completed_runs: usize,
    pub algorithms: BTreeMap<Algorithm, AlgorithmSummary>,
    /// Fraction of runs with both heuristics completed where hv(modmvnf) >= hv(mopso).
    pub ga_win_rate_vs_pso: Option<f64>,
    pub ga_hv_ratio_to_exact: Option<MeanStd>,
    /// Fraction of runs with an exact front where hv(modmvnf) >= 0.95 hv(exact).
    pub ga_within_95pct_of_exact: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub preset: Preset,
    pub runs: usize,
    pub seed: u64,
    pub config: serde_json::Value,
    pub entries: Vec<RunEntry>,
    pub summary: Summary,
}

fn run_one(cfg: &ExperimentConfig, run: usize) -> Result<RunEntry, BenchError> {
    let spec = cfg.instance_spec(run);
    let inst: Instance = generate(&spec)?;
    let fp = fingerprint(&inst);
    let problem = Problem::new(inst, EvalOptions::default())?;
    let mut settings = cfg.settings.clone();
    settings.ga.seed = derive_seed(cfg.seed, 3 * run as u64 + 1);
    settings.pso.seed = derive_seed(cfg.seed, 3 * run as u64 + 2);

    let mut entries = Vec::new();
    let mut record = |algorithm, res: Result<ExperimentResult, BenchError>| {
        let e = match res {
            Ok(r) => Entry { algorithm, error: None, result: Some(r) },
            Err(err) => Entry { algorithm, error: Some(err.to_string()), result: None },
        };
        entries.push(e);
    };

    let ga = run_algorithm(&problem, Algorithm::Modmvnf, &settings);
    if let Ok(g) = &ga {
        let budget = g.evaluations;
        settings.pso.max_evaluations = Some(budget);
        settings.pso.iterations = usize::try_from(budget.div_ceil(settings.pso.swarm_size as u64)).unwrap_or(usize::MAX);
    }
    record(Algorithm::Modmvnf, ga);
    record(Algorithm::Mopso, run_algorithm(&problem, Algorithm::Mopso, &settings));
    if cfg.include_exact {
        record(Algorithm::Exact, run_algorithm(&problem, Algorithm::Exact, &settings));
    }
    let metrics = run_metrics(&entries);
    Ok(RunEntry { run, instance_seed: spec.seed, fingerprint: fp, entries, metrics })
}

fn result_of(entries: &[Entry], a: Algorithm) -> Option<&ExperimentResult> {
    entries.iter().find(|e| e.algorithm == a).and_then(|e| e.result.as_ref())
}

pub fn run_metrics(entries: &[Entry]) -> RunMetrics {
    let fronts: Vec<(Algorithm, Vec<Pair>)> =
        entries.iter().filter_map(|e| e.result.as_ref().map(|r| (e.algorithm, r.pairs()))).collect();
    let reference = (!fronts.is_empty()).then(|| reference_point(fronts.iter().map(|(_, f)| f.as_slice())));
    let hypervolume: BTreeMap<Algorithm, f64> = match reference {
        Some(r) => fronts.iter().map(|(a, f)| (*a, hypervolume_2d(f, r))).collect(),
        None => BTreeMap::new(),
    };
    let ga = result_of(entries, Algorithm::Modmvnf);
    let pso = result_of(entries, Algorithm::Mopso);
    let both = ga.zip(pso);
    let ratio = match (hypervolume.get(&Algorithm::Modmvnf), hypervolume.get(&Algorithm::Exact)) {
        (Some(&g), Some(&e)) => Some(if e > 0.0 { g / e } else { 1.0 }),
        _ => None,
    };
    RunMetrics {
        reference_point: reference,
        coverage_ga_pso: both.map(|(g, p)| coverage(&g.pairs(), &p.pairs())),
        coverage_pso_ga: both.map(|(g, p)| coverage(&p.pairs(), &g.pairs())),
        ga_beats_pso: both.map(|_| hypervolume[&Algorithm::Modmvnf] >= hypervolume[&Algorithm::Mopso]),
        evaluation_gap: both.map(|(g, p)| g.evaluations as i64 - p.evaluations as i64),
        ga_hv_ratio_to_exact: ratio,
        hypervolume,
    }
}

fn summarize(entries: &[RunEntry]) -> Summary {
    let mut algorithms = BTreeMap::new();
    for a in Algorithm::ALL {
        let results: Vec<&ExperimentResult> =
            entries.iter().filter_map(|r| result_of(&r.entries, a)).collect();
        let failed = entries.iter().flat_map(|r| &r.entries).filter(|e| e.algorithm == a && !e.ok()).count();
        if results.is_empty() && failed == 0 {
            continue;
        }
        let hv: Vec<f64> = entries.iter().filter_map(|r| r.metrics.hypervolume.get(&a).copied()).collect();
        let col = |f: &dyn Fn(&ExperimentResult) -> f64| results.iter().map(|r| f(r)).collect::<Vec<f64>>();
        algorithms.insert(
            a,
            AlgorithmSummary {
                completed: results.len(),
                failed,
                hypervolume: MeanStd::of(&hv),
                front_size: MeanStd::of(&col(&|r| r.front.len() as f64)),
                mean_cost: MeanStd::of(&col(&|r| r.stats.mean_cost)),
                mean_latency: MeanStd::of(&col(&|r| r.stats.mean_latency)),
                evaluations: MeanStd::of(&col(&|r| r.evaluations as f64)),
            },
        );
    }
    let wins: Vec<bool> = entries.iter().filter_map(|r| r.metrics.ga_beats_pso).collect();
    let ratios: Vec<f64> = entries.iter().filter_map(|r| r.metrics.ga_hv_ratio_to_exact).collect();
    let frac = |n: usize, d: usize| (d > 0).then(|| n as f64 / d as f64);
    Summary {
        completed_runs: entries.iter().filter(|r| r.entries.iter().any(Entry::ok)).count(),
        algorithms,
        ga_win_rate_vs_pso: frac(wins.iter().filter(|&&w| w).count(), wins.len()),
        ga_hv_ratio_to_exact: MeanStd::of(&ratios),
        ga_within_95pct_of_exact: frac(ratios.iter().filter(|&&r| r >= 0.95).count(), ratios.len()),
    }
}

fn thread_count(cfg: &ExperimentConfig) -> Option<usize> {
    cfg.threads
        .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok()))
        .filter(|&n| n > 0)
}

pub fn config_echo(cfg: &ExperimentConfig) -> serde_json::Value {
    serde_json::json!({
        "preset": cfg.preset,
        "unit_costs": cfg.unit_costs,
        "ga": cfg.settings.ga,
        "pso": cfg.settings.pso,
        "include_exact": cfg.include_exact,
        "max_total_assignments": u64::try_from(cfg.settings.exact.max_total_assignments).unwrap_or(u64::MAX),
        "seed_rule": "instance derive_seed(seed, 3r); modmvnf derive_seed(seed, 3r+1); mopso derive_seed(seed, 3r+2)",
    })
}

/// Runs every cell; runs execute in parallel, results are assembled in run order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, BenchError> {
    if cfg.runs == 0 {
        return Err(BenchError::Invalid("runs must be positive".into()));
    }
    cfg.settings.ga.validate()?;
    cfg.settings.pso.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count(cfg) {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| BenchError::Invalid(format!("thread pool: {e}")))?;
    let entries: Vec<RunEntry> =
        pool.install(|| (0..cfg.runs).into_par_iter().map(|r| run_one(cfg, r)).collect::<Result<_, _>>())?;
    let summary = summarize(&entries);
    Ok(ExperimentReport {
        schema_version: SCHEMA_VERSION,
        preset: cfg.preset,
        runs: cfg.runs,
        seed: cfg.seed,
        config: config_echo(cfg),
        entries,
        summary,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentBarRow {
    pub run: usize,
    pub algorithm: String,
    pub sfc: usize,
    pub mean_cost: f64,
    pub mean_latency: f64,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, BenchError> {
        let r: ExperimentReport = serde_json::from_str(s).map_err(|e| BenchError::Invalid(format!("report: {e}")))?;
        r.validate().map_err(BenchError::Invalid)?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(format!("schema_version {}", self.schema_version));
        }
        if self.entries.len() != self.runs || self.entries.iter().enumerate().any(|(i, e)| e.run != i) {
            return Err("one entry per run, in order".into());
        }
        for run in &self.entries {
            for e in &run.entries {
                match (&e.result, &e.error) {
                    (Some(r), None) => {
                        r.validate().map_err(|v| format!("run {} {}: {}", run.run, e.algorithm, v.join("; ")))?;
                        if r.algorithm != e.algorithm || r.instance.fingerprint != run.fingerprint {
                            return Err(format!("run {} {}: result does not match its entry", run.run, e.algorithm));
                        }
                    }
                    (None, Some(_)) => {}
                    _ => return Err(format!("run {} {}: exactly one of result and error", run.run, e.algorithm)),
                }
            }
            if run_metrics(&run.entries) != run.metrics {
                return Err(format!("run {}: metrics do not match the stored fronts", run.run));
            }
        }
        if summarize(&self.entries) != self.summary {
            return Err("summary does not match the entries".into());
        }
        Ok(())
    }

    pub fn bar_rows(&self) -> Vec<ExperimentBarRow> {
        let mut rows = Vec::new();
        for run in &self.entries {
            for r in run.entries.iter().filter_map(|e| e.result.as_ref()) {
                for s in &r.per_sfc {
                    rows.push(ExperimentBarRow {
                        run: run.run,
                        algorithm: r.algorithm.tag().into(),
                        sfc: s.sg,
                        mean_cost: s.mean_cost,
                        mean_latency: s.mean_latency,
                    });
                }
            }
        }
        rows
    }

    /// CDFs over runs of each algorithm's mean front cost and latency.
    pub fn cdf_rows(&self) -> Vec<CdfRow> {
        let mut rows = Vec::new();
        for a in Algorithm::ALL {
            let results: Vec<&ExperimentResult> = self.entries.iter().filter_map(|r| result_of(&r.entries, a)).collect();
            let costs: Vec<f64> = results.iter().map(|r| r.stats.mean_cost).collect();
            let lats: Vec<f64> = results.iter().map(|r| r.stats.mean_latency).collect();
            rows.extend(cdf_rows(a.tag(), "cost", &costs));
            rows.extend(cdf_rows(a.tag(), "latency", &lats));
        }
        rows
    }

    pub fn summary_text(&self) -> String {
        let mut s = String::new();
        let s_ = &self.summary;
        let _ = writeln!(s, "preset {}  runs {}  seed {}  completed {}", self.preset, self.runs, self.seed, s_.completed_runs);
        let _ = writeln!(
            s,
            "{:<8} {:>5} {:>5} {:>14} {:>10} {:>14} {:>12} {:>12}",
            "algo", "ok", "fail", "hypervolume", "|front|", "mean cost", "mean lat", "evaluations"
        );
        let fmt = |m: &Option<MeanStd>| m.as_ref().map_or("-".to_string(), |m| format!("{:.4e}", m.mean));
        for (a, sum) in &s_.algorithms {
            let _ = writeln!(
                s,
                "{:<8} {:>5} {:>5} {:>14} {:>10} {:>14} {:>12} {:>12}",
                a.tag(),
                sum.completed,
                sum.failed,
                fmt(&sum.hypervolume),
                sum.front_size.as_ref().map_or("-".into(), |m| format!("{:.2}", m.mean)),
                fmt(&sum.mean_cost),
                sum.mean_latency.as_ref().map_or("-".into(), |m| format!("{:.3}", m.mean)),
                sum.evaluations.as_ref().map_or("-".into(), |m| format!("{:.0}", m.mean)),
            );
        }
        if let Some(w) = s_.ga_win_rate_vs_pso {
            let _ = writeln!(s, "modmvnf hypervolume >= mopso in {:.1}% of runs", 100.0 * w);
        }
        if let Some(r) = &s_.ga_hv_ratio_to_exact {
            let _ = writeln!(s, "modmvnf / exact hypervolume: mean {:.4} (std {:.4}, n {})", r.mean, r.std, r.n);
        }
        if let Some(f) = s_.ga_within_95pct_of_exact {
            let _ = writeln!(s, "modmvnf within 95% of exact hypervolume in {:.1}% of runs", 100.0 * f);
        }
        for run in &self.entries {
            for e in run.entries.iter().filter(|e| !e.ok()) {
                let _ = writeln!(s, "run {} {}: {}", run.run, e.algorithm, e.error.as_deref().unwrap_or(""));
            }
        }
        s
    }

    /// Writes report.json, summary.txt, bars.csv and cdf.csv into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<(), BenchError> {
        std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
        let write = |name: &str, bytes: &[u8]| {
            let p = dir.join(name);
            std::fs::write(&p, bytes).map_err(|e| BenchError::io(&p, e))
        };
        write("report.json", self.to_json().as_bytes())?;
        write("summary.txt", self.summary_text().as_bytes())?;
        let mut bars = Vec::new();
        write_csv(&mut bars, &self.bar_rows())?;
        write("bars.csv", &bars)?;
        let cdf = self.cdf_rows();
        validate_cdf(&cdf).map_err(BenchError::Invalid)?;
        let mut buf = Vec::new();
        write_csv(&mut buf, &cdf)?;
        write("cdf.csv", &buf)
    }
}
