//! Figure data as CSV: per-SFC bars and empirical CDFs.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::BenchError;
use crate::result::ExperimentResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarRow {
    pub algorithm: String,
    pub sfc: usize,
    pub mean_cost: f64,
    pub mean_latency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfRow {
    pub algorithm: String,
    pub objective: String,
    pub value: f64,
    pub probability: f64,
}

pub fn bar_rows(results: &[ExperimentResult]) -> Vec<BarRow> {
    results
        .iter()
        .flat_map(|r| {
            r.per_sfc.iter().map(move |s| BarRow {
                algorithm: r.algorithm.tag().to_string(),
                sfc: s.sg,
                mean_cost: s.mean_cost,
                mean_latency: s.mean_latency,
            })
        })
        .collect()
}

/// Sorted values with probabilities `i / n`, one row per value.
pub fn cdf_rows(algorithm: &str, objective: &str, values: &[f64]) -> Vec<CdfRow> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.into_iter()
        .enumerate()
        .map(|(i, value)| CdfRow {
            algorithm: algorithm.to_string(),
            objective: objective.to_string(),
            value,
            probability: (i + 1) as f64 / n,
        })
        .collect()
}

/// CDF rows of front cost and latency for every result.
pub fn front_cdf_rows(results: &[ExperimentResult]) -> Vec<CdfRow> {
    let mut rows = Vec::new();
    for r in results {
        let pairs = r.pairs();
        let costs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let lats: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        rows.extend(cdf_rows(r.algorithm.tag(), "cost", &costs));
        rows.extend(cdf_rows(r.algorithm.tag(), "latency", &lats));
    }
    rows
}

pub fn write_csv<W: Write, S: Serialize>(w: W, rows: &[S]) -> Result<(), BenchError> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r).map_err(|e| BenchError::Invalid(format!("csv: {e}")))?;
    }
    out.flush().map_err(|e| BenchError::Invalid(format!("csv: {e}")))?;
    Ok(())
}

pub fn read_csv<R: Read, D: for<'de> Deserialize<'de>>(r: R) -> Result<Vec<D>, BenchError> {
    csv::Reader::from_reader(r)
        .deserialize()
        .collect::<Result<Vec<D>, _>>()
        .map_err(|e| BenchError::Invalid(format!("csv: {e}")))
}

pub fn validate_bars(rows: &[BarRow]) -> Result<(), String> {
    for r in rows {
        if !(r.mean_cost.is_finite() && r.mean_cost >= 0.0 && r.mean_latency.is_finite() && r.mean_latency >= 0.0) {
            return Err(format!("bar row {r:?} has invalid values"));
        }
    }
    Ok(())
}

/// Every (algorithm, objective) series is non-decreasing in value and
/// probability, ends at 1.0 and has probabilities `i / n`.
pub fn validate_cdf(rows: &[CdfRow]) -> Result<(), String> {
    let mut series: BTreeMap<(&str, &str), Vec<&CdfRow>> = BTreeMap::new();
    for r in rows {
        series.entry((r.algorithm.as_str(), r.objective.as_str())).or_default().push(r);
    }
    for ((alg, obj), s) in series {
        let n = s.len() as f64;
        for (i, r) in s.iter().enumerate() {
            if (r.probability - (i + 1) as f64 / n).abs() > 1e-12 {
                return Err(format!("{alg}/{obj}: row {i} has probability {}", r.probability));
            }
        }
        if s.windows(2).any(|w| w[1].value < w[0].value || w[1].probability < w[0].probability) {
            return Err(format!("{alg}/{obj}: not monotone"));
        }
        if s.last().map(|r| r.probability) != Some(1.0) {
            return Err(format!("{alg}/{obj}: does not end at 1.0"));
        }
    }
    Ok(())
}
