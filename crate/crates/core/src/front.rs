use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::encoding::Chromosome;
use crate::objectives::{dominates, ObjectiveValues};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontPoint<T> {
    pub cost: T,
    pub latency: T,
    pub chromosome: Chromosome,
}

impl<T: Scalar> FrontPoint<T> {
    pub fn objectives(&self) -> ObjectiveValues<T> {
        ObjectiveValues::feasible(self.cost, self.latency)
    }
}

/// Mutually non-dominated feasible points, ascending by (cost, latency).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParetoFront<T> {
    points: Vec<FrontPoint<T>>,
}

impl<T: Scalar> Default for ParetoFront<T> {
    fn default() -> Self {
        ParetoFront { points: Vec::new() }
    }
}

impl<T: Scalar> ParetoFront<T> {
    /// Keeps the feasible, non-dominated candidates; exact duplicates of
    /// (cost, latency, chromosome) are collapsed.
    pub fn from_candidates(candidates: impl IntoIterator<Item = (ObjectiveValues<T>, Chromosome)>) -> Self {
        let feasible: Vec<(ObjectiveValues<T>, Chromosome)> =
            candidates.into_iter().filter(|(o, _)| o.feasible && o.cost.is_finite() && o.latency.is_finite()).collect();
        let mut points: Vec<FrontPoint<T>> = feasible
            .iter()
            .filter(|(o, _)| !feasible.iter().any(|(other, _)| dominates(other, o)))
            .map(|(o, c)| FrontPoint { cost: o.cost, latency: o.latency, chromosome: c.clone() })
            .collect();
        points.sort_by(compare_points);
        points.dedup();
        ParetoFront { points }
    }

    pub fn points(&self) -> &[FrontPoint<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn objective_pairs(&self) -> Vec<(T, T)> {
        self.points.iter().map(|p| (p.cost, p.latency)).collect()
    }

    pub fn is_mutually_nondominated(&self) -> bool {
        self.points
            .iter()
            .all(|a| self.points.iter().all(|b| !dominates(&a.objectives(), &b.objectives())))
    }
}

fn compare_points<T: Scalar>(a: &FrontPoint<T>, b: &FrontPoint<T>) -> Ordering {
    a.cost
        .partial_cmp(&b.cost)
        .unwrap_or(Ordering::Equal)
        .then(a.latency.partial_cmp(&b.latency).unwrap_or(Ordering::Equal))
        .then_with(|| a.chromosome.cmp(&b.chromosome))
}
