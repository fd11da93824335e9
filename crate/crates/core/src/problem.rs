//! A validated instance bundled with its latency matrix: the shared,
//! read-only evaluation context of every solver.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoding::{check_genes, Chromosome, DecompositionMatrix, EncodingError};
use crate::model::{shortest_path_matrix, Instance, LatencyMatrix, ModelError, NetworkFunction, NfType, PhysicalNetwork, ServiceGraph};
use crate::objectives::{self, check_latency_target, raw_cost, sum_type_costs, EvalConfig, ObjectiveValues, Placement, ResourceLedger};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EvalOptions {
    /// Sum latency over declared decomposition edges instead of consecutive NFs.
    pub latency_over_edges: bool,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("no feasible solution found")]
    NoFeasibleSolution,
    #[error("search space of {size} assignments exceeds the cap of {cap}")]
    SearchSpaceTooLarge { size: u128, cap: u128 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
}

pub struct Problem<T> {
    instance: Instance<T>,
    latency: LatencyMatrix<T>,
    options: EvalOptions,
    matrices: Vec<DecompositionMatrix>,
    hosts_by_type: [Vec<usize>; 4],
    evaluations: AtomicU64,
}

impl<T: Scalar> Problem<T> {
    /// Validates the instance and precomputes shortest-path latencies.
    pub fn new(instance: Instance<T>, options: EvalOptions) -> Result<Self, ModelError> {
        let violations = instance.validate();
        if !violations.is_empty() {
            return Err(ModelError::InvalidInstance(violations));
        }
        let latency = shortest_path_matrix(&instance.physical_network)?;
        let matrices = instance.service_graphs.iter().map(DecompositionMatrix::new).collect();
        let hosts_by_type = NfType::ALL.map(|t| {
            instance
                .physical_network
                .nodes
                .iter()
                .enumerate()
                .filter(|(_, n)| n.supports(t))
                .map(|(i, _)| i)
                .collect()
        });
        Ok(Problem { instance, latency, options, matrices, hosts_by_type, evaluations: AtomicU64::new(0) })
    }

    pub fn instance(&self) -> &Instance<T> {
        &self.instance
    }

    pub fn network(&self) -> &PhysicalNetwork<T> {
        &self.instance.physical_network
    }

    pub fn service_graphs(&self) -> &[ServiceGraph] {
        &self.instance.service_graphs
    }

    pub fn latency(&self) -> &LatencyMatrix<T> {
        &self.latency
    }

    pub fn options(&self) -> EvalOptions {
        self.options
    }

    pub fn eval_config(&self) -> EvalConfig<T> {
        EvalConfig { latency_over_edges: self.options.latency_over_edges, l_target: self.instance.l_target }
    }

    pub fn decomposition_matrices(&self) -> &[DecompositionMatrix] {
        &self.matrices
    }

    /// Host positions that support `t`.
    pub fn hosts_for(&self, t: NfType) -> &[usize] {
        &self.hosts_by_type[t.index()]
    }

    pub fn nf(&self, sg: usize, dec: usize, nf: usize) -> &NetworkFunction {
        &self.instance.service_graphs[sg].decompositions[dec].nfs[nf]
    }

    /// Number of objective evaluations performed so far.
    pub fn evaluations(&self) -> u64 {
        self.evaluations.load(Ordering::Relaxed)
    }

    /// `prod_sg sum_dc |hosts|^|dc|`, saturating.
    pub fn search_space_size(&self) -> u128 {
        let n = self.network().nodes.len() as u128;
        self.service_graphs().iter().fold(1u128, |acc, sg| {
            let per_sg = sg
                .decompositions
                .iter()
                .fold(0u128, |s, dc| s.saturating_add(n.saturating_pow(dc.nfs.len() as u32)));
            acc.saturating_mul(per_sg)
        })
    }

    /// Gene-by-gene feasibility and objective evaluation: each gene reserves
    /// its NF's demand on its host; the first failure makes the whole
    /// chromosome infeasible.
    pub fn evaluate(&self, chromosome: &Chromosome) -> ObjectiveValues<T> {
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        self.evaluate_uncounted(chromosome)
    }

    fn evaluate_uncounted(&self, chromosome: &Chromosome) -> ObjectiveValues<T> {
        let net = self.network();
        if check_genes(chromosome.genes(), self.service_graphs(), net.nodes.len()).is_err() {
            return ObjectiveValues::infeasible();
        }
        let mut ledger = ResourceLedger::full(net);
        for g in chromosome.genes() {
            let nf = self.nf(g.sg, g.dec, g.nf);
            if !net.nodes[g.host].supports(nf.nf_type) || !ledger.try_reserve(g.host, nf) {
                return ObjectiveValues::infeasible();
            }
        }
        let (cost, latency) = self
            .segment_objectives(chromosome)
            .fold((T::zero(), T::zero()), |(c, l), (sc, sl)| (c + sc, l + sl));
        if !check_latency_target(latency, self.instance.l_target) {
            return ObjectiveValues::infeasible();
        }
        ObjectiveValues::feasible(cost, latency)
    }

    /// Cost and latency of each service-graph segment (no feasibility check).
    pub fn segment_objectives<'a>(&'a self, chromosome: &'a Chromosome) -> impl Iterator<Item = (T, T)> + 'a {
        let net = self.network();
        chromosome.segments().map(move |seg| {
            let mut by_type = [T::zero(); 4];
            for g in seg {
                let nf = self.nf(g.sg, g.dec, g.nf);
                by_type[nf.nf_type.index()] = by_type[nf.nf_type.index()] + raw_cost(nf, &net.nodes[g.host]);
            }
            let mut latency = T::zero();
            if self.options.latency_over_edges {
                let dc = &self.service_graphs()[seg[0].sg].decompositions[seg[0].dec];
                for &(a, b) in &dc.edges {
                    latency = latency + self.latency.get(seg[a].host, seg[b].host);
                }
            } else {
                for w in seg.windows(2) {
                    latency = latency + self.latency.get(w[0].host, w[1].host);
                }
            }
            (sum_type_costs(&by_type), latency)
        })
    }

    /// Evaluates per-SG placements through the constraint-by-constraint path.
    pub fn evaluate_placements(&self, placements: &[Placement]) -> ObjectiveValues<T> {
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        objectives::evaluate(placements, self.network(), &self.latency, self.service_graphs(), &self.eval_config())
    }
}
