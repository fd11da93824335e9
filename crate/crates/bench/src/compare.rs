//! Comparison of result files produced on the same instance.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::BenchError;
use crate::figures::{bar_rows, front_cdf_rows, validate_bars, validate_cdf, write_csv};
use crate::metrics::{coverage, hypervolume_2d, reference_point, Pair};
use crate::result::{ExactSummary, ExperimentResult, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub label: String,
    pub algorithm: String,
    pub hypervolume: f64,
    pub front_size: usize,
    pub min_cost: f64,
    pub mean_cost: f64,
    pub min_latency: f64,
    pub mean_latency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    /// C(a, b): fraction of b dominated or equalled by a.
    pub a: String,
    pub b: String,
    pub coverage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareReport {
    pub schema_version: u32,
    pub fingerprint: String,
    pub reference_point: Pair,
    pub metrics: Vec<MetricsRow>,
    pub coverage: Vec<CoverageRow>,
    pub exact: Option<ExactSummary>,
}

/// Labels are the algorithm tags, suffixed with `#k` when a tag repeats.
fn labels(results: &[ExperimentResult]) -> Vec<String> {
    results
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let tag = r.algorithm.tag();
            let repeats = results.iter().filter(|o| o.algorithm == r.algorithm).count() > 1;
            if repeats {
                format!("{tag}#{i}")
            } else {
                tag.to_string()
            }
        })
        .collect()
}

pub fn compare(results: &[ExperimentResult]) -> Result<CompareReport, BenchError> {
    if results.len() < 2 {
        return Err(BenchError::Invalid("compare needs at least two result files".into()));
    }
    let fp = &results[0].instance.fingerprint;
    if let Some(other) = results.iter().find(|r| &r.instance.fingerprint != fp) {
        return Err(BenchError::Invalid(format!(
            "results come from different instances ({} vs {})",
            &fp[..12],
            &other.instance.fingerprint[..12.min(other.instance.fingerprint.len())]
        )));
    }
    let fronts: Vec<Vec<Pair>> = results.iter().map(ExperimentResult::pairs).collect();
    let reference = reference_point(fronts.iter().map(Vec::as_slice));
    let names = labels(results);
    let metrics = results
        .iter()
        .zip(&fronts)
        .zip(&names)
        .map(|((r, f), label)| MetricsRow {
            label: label.clone(),
            algorithm: r.algorithm.tag().to_string(),
            hypervolume: hypervolume_2d(f, reference),
            front_size: f.len(),
            min_cost: r.stats.min_cost,
            mean_cost: r.stats.mean_cost,
            min_latency: r.stats.min_latency,
            mean_latency: r.stats.mean_latency,
        })
        .collect();
    let mut cov = Vec::new();
    for (i, a) in fronts.iter().enumerate() {
        for (j, b) in fronts.iter().enumerate() {
            if i != j {
                cov.push(CoverageRow { a: names[i].clone(), b: names[j].clone(), coverage: coverage(a, b) });
            }
        }
    }
    Ok(CompareReport {
        schema_version: SCHEMA_VERSION,
        fingerprint: fp.clone(),
        reference_point: reference,
        metrics,
        coverage: cov,
        exact: results.iter().find_map(|r| r.exact.clone()),
    })
}

impl CompareReport {
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "reference point ({:.4}, {:.4})", self.reference_point.0, self.reference_point.1);
        let _ = writeln!(
            s,
            "{:<12} {:>14} {:>7} {:>12} {:>12} {:>10} {:>10}",
            "result", "hypervolume", "|front|", "min cost", "mean cost", "min lat", "mean lat"
        );
        for m in &self.metrics {
            let _ = writeln!(
                s,
                "{:<12} {:>14.6e} {:>7} {:>12.2} {:>12.2} {:>10.3} {:>10.3}",
                m.label, m.hypervolume, m.front_size, m.min_cost, m.mean_cost, m.min_latency, m.mean_latency
            );
        }
        for c in &self.coverage {
            let _ = writeln!(s, "C({}, {}) = {:.4}", c.a, c.b, c.coverage);
        }
        if let Some(e) = &self.exact {
            let _ = writeln!(s, "exact minima: cost {} latency {}", e.min_cost, e.min_latency);
        }
        s
    }

    /// Writes bars.csv, cdf.csv and metrics (json or csv) into `dir`.
    pub fn write_to(&self, dir: &Path, results: &[ExperimentResult], csv_metrics: bool) -> Result<(), BenchError> {
        std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
        let write = |name: &str, bytes: &[u8]| {
            let p = dir.join(name);
            std::fs::write(&p, bytes).map_err(|e| BenchError::io(&p, e))
        };
        let bars = bar_rows(results);
        validate_bars(&bars).map_err(BenchError::Invalid)?;
        let mut buf = Vec::new();
        write_csv(&mut buf, &bars)?;
        write("bars.csv", &buf)?;
        let cdf = front_cdf_rows(results);
        validate_cdf(&cdf).map_err(BenchError::Invalid)?;
        let mut buf = Vec::new();
        write_csv(&mut buf, &cdf)?;
        write("cdf.csv", &buf)?;
        if csv_metrics {
            let mut buf = Vec::new();
            write_csv(&mut buf, &self.metrics)?;
            write("metrics.csv", &buf)?;
            let mut buf = Vec::new();
            write_csv(&mut buf, &self.coverage)?;
            write("coverage.csv", &buf)
        } else {
            let mut s = serde_json::to_string_pretty(self).expect("report serializes");
            s.push('\n');
            write("metrics.json", s.as_bytes())
        }
    }
}
