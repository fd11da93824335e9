//! Front quality indicators for two minimized objectives.

use serde::{Deserialize, Serialize};

/// A (cost, latency) pair.
pub type Pair = (f64, f64);

/// Component-wise maximum over all points of all fronts, times 1.1.
pub fn reference_point<'a>(fronts: impl IntoIterator<Item = &'a [Pair]>) -> Pair {
    let mut r = (0.0f64, 0.0f64);
    for f in fronts {
        for &(c, l) in f {
            r.0 = r.0.max(c);
            r.1 = r.1.max(l);
        }
    }
    (r.0 * 1.1, r.1 * 1.1)
}

/// Area dominated by `points` and bounded by `reference`.
pub fn hypervolume_2d(points: &[Pair], reference: Pair) -> f64 {
    let mut pts: Vec<Pair> = points.iter().copied().filter(|&(c, l)| c < reference.0 && l < reference.1).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut hv = 0.0;
    let mut ceiling = reference.1;
    for (c, l) in pts {
        if l < ceiling {
            hv += (reference.0 - c) * (ceiling - l);
            ceiling = l;
        }
    }
    hv
}

fn weakly_dominates(a: Pair, b: Pair) -> bool {
    a.0 <= b.0 && a.1 <= b.1
}

/// Fraction of `b` dominated or equalled by some point of `a`; 0 for empty `b`.
pub fn coverage(a: &[Pair], b: &[Pair]) -> f64 {
    if b.is_empty() {
        return 0.0;
    }
    let covered = b.iter().filter(|&&y| a.iter().any(|&x| weakly_dominates(x, y))).count();
    covered as f64 / b.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveStats {
    pub min_cost: f64,
    pub mean_cost: f64,
    pub min_latency: f64,
    pub mean_latency: f64,
}

impl ObjectiveStats {
    pub fn of(points: &[Pair]) -> Option<Self> {
        if points.is_empty() {
            return None;
        }
        let n = points.len() as f64;
        Some(ObjectiveStats {
            min_cost: points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min),
            mean_cost: points.iter().map(|p| p.0).sum::<f64>() / n,
            min_latency: points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min),
            mean_latency: points.iter().map(|p| p.1).sum::<f64>() / n,
        })
    }
}

/// Sample mean and standard deviation (n - 1 denominator; 0 for one value).
pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return Some((mean, 0.0));
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Some((mean, var.sqrt()))
}
