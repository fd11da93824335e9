//! Exhaustive Pareto enumeration for small instances.
//!
//! Every combination of decompositions is visited; for each, NFs are assigned
//! host by host in chromosome order with capacity, type and latency-target
//! pruning. Objectives are accumulated in the same order as
//! [`Problem::evaluate`], so the values are bit-identical to it.

use serde::{Deserialize, Serialize};

use crate::encoding::{Chromosome, Gene};
use crate::front::ParetoFront;
use crate::model::NetworkFunction;
use crate::objectives::{dominates, raw_cost, sum_type_costs, ObjectiveValues, ResourceLedger};
use crate::problem::{Problem, SolveError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactLimits {
    pub max_nfs_per_decomposition: usize,
    pub max_nodes: usize,
    pub max_total_assignments: u128,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits { max_nfs_per_decomposition: 10, max_nodes: 64, max_total_assignments: 100_000_000 }
    }
}

impl ExactLimits {
    pub fn check<T: Scalar>(&self, problem: &Problem<T>) -> Result<u128, SolveError> {
        let nodes = problem.network().nodes.len();
        if nodes > self.max_nodes {
            return Err(SolveError::SearchSpaceTooLarge { size: nodes as u128, cap: self.max_nodes as u128 });
        }
        let widest = problem.service_graphs().iter().map(|sg| sg.max_nfs()).max().unwrap_or(0);
        if widest > self.max_nfs_per_decomposition {
            return Err(SolveError::SearchSpaceTooLarge {
                size: widest as u128,
                cap: self.max_nfs_per_decomposition as u128,
            });
        }
        let size = problem.search_space_size();
        if size > self.max_total_assignments {
            return Err(SolveError::SearchSpaceTooLarge { size, cap: self.max_total_assignments });
        }
        Ok(size)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactFront<T> {
    pub front: ParetoFront<T>,
    /// Complete feasible assignments reached by the search.
    pub leaves: u64,
    /// Unpruned size of the search space.
    pub search_space: u128,
}

impl<T: Scalar> ExactFront<T> {
    /// Minimum cost over all feasible solutions.
    pub fn min_cost(&self) -> T {
        self.front.points()[0].cost
    }

    /// Minimum latency over all feasible solutions.
    pub fn min_latency(&self) -> T {
        self.front.points().iter().map(|p| p.latency).fold(T::infinity(), T::min)
    }
}

struct Slot<'a> {
    sg: usize,
    dec: usize,
    nf: usize,
    def: &'a NetworkFunction,
    hosts: &'a [usize],
    last_in_segment: bool,
}

struct Search<'a, T> {
    problem: &'a Problem<T>,
    slots: Vec<Slot<'a>>,
    hosts: Vec<usize>,
    ledger: ResourceLedger,
    archive: Vec<(ObjectiveValues<T>, Chromosome)>,
    leaves: u64,
}

impl<'a, T: Scalar> Search<'a, T> {
    fn segment_latency(&self, end: usize, start: usize) -> T {
        let lat = self.problem.latency();
        let mut l = T::zero();
        if self.problem.options().latency_over_edges {
            let s = &self.slots[start];
            let dc = &self.problem.service_graphs()[s.sg].decompositions[s.dec];
            for &(a, b) in &dc.edges {
                l = l + lat.get(self.hosts[start + a], self.hosts[start + b]);
            }
        } else {
            for i in start + 1..=end {
                l = l + lat.get(self.hosts[i - 1], self.hosts[i]);
            }
        }
        l
    }

    /// `depth` is the next slot to assign; `seg_start` the first slot of the
    /// current segment; `(cost, latency)` the totals of completed segments.
    fn dfs(&mut self, depth: usize, seg_start: usize, by_type: [T; 4], cost: T, latency: T) {
        if depth == self.slots.len() {
            self.leaf(cost, latency);
            return;
        }
        let target = self.problem.instance().l_target;
        let chain = !self.problem.options().latency_over_edges;
        let slot_hosts = self.slots[depth].hosts;
        for &h in slot_hosts {
            let slot = &self.slots[depth];
            let def = slot.def;
            if !self.ledger.try_reserve(h, def) {
                continue;
            }
            self.hosts[depth] = h;
            let mut bt = by_type;
            let t = def.nf_type.index();
            bt[t] = bt[t] + raw_cost(def, &self.problem.network().nodes[h]);
            if slot.last_in_segment {
                let c = cost + sum_type_costs(&bt);
                let l = latency + self.segment_latency(depth, seg_start);
                if !target.is_some_and(|t| l > t) {
                    self.dfs(depth + 1, depth + 1, [T::zero(); 4], c, l);
                }
            } else if !(chain && target.is_some_and(|t| latency + self.segment_latency(depth, seg_start) > t)) {
                self.dfs(depth + 1, seg_start, bt, cost, latency);
            }
            self.ledger.release(h, def);
        }
    }

    fn leaf(&mut self, cost: T, latency: T) {
        self.leaves += 1;
        let o = ObjectiveValues::feasible(cost, latency);
        if self.archive.iter().any(|(a, _)| dominates(a, &o) || (a.cost == cost && a.latency == latency)) {
            return;
        }
        self.archive.retain(|(a, _)| !dominates(&o, a));
        let genes = self
            .slots
            .iter()
            .zip(&self.hosts)
            .map(|(s, &host)| Gene { host, nf: s.nf, dec: s.dec, sg: s.sg })
            .collect();
        self.archive.push((o, Chromosome::new(genes)));
    }
}

/// Enumerates every decomposition choice and NF-to-host assignment and
/// returns the exact Pareto front, one witness per point, ascending by cost.
pub fn exact_pareto<T: Scalar>(problem: &Problem<T>, limits: &ExactLimits) -> Result<ExactFront<T>, SolveError> {
    let search_space = limits.check(problem)?;
    let sgs = problem.service_graphs();
    let mut search = Search {
        problem,
        slots: Vec::new(),
        hosts: Vec::new(),
        ledger: ResourceLedger::full(problem.network()),
        archive: Vec::new(),
        leaves: 0,
    };
    let mut choice = vec![0usize; sgs.len()];
    'combos: loop {
        search.slots.clear();
        for (sg, &dec) in choice.iter().enumerate() {
            let nfs = &sgs[sg].decompositions[dec].nfs;
            for (nf, def) in nfs.iter().enumerate() {
                search.slots.push(Slot {
                    sg,
                    dec,
                    nf,
                    def,
                    hosts: problem.hosts_for(def.nf_type),
                    last_in_segment: nf + 1 == nfs.len(),
                });
            }
        }
        search.hosts = vec![0; search.slots.len()];
        search.dfs(0, 0, [T::zero(); 4], T::zero(), T::zero());

        // odometer over decomposition indices
        for k in (0..choice.len()).rev() {
            choice[k] += 1;
            if choice[k] < sgs[k].decompositions.len() {
                continue 'combos;
            }
            choice[k] = 0;
        }
        break;
    }

    let leaves = search.leaves;
    let mut candidates = Vec::with_capacity(search.archive.len());
    for (o, c) in search.archive {
        let check = problem.evaluate(&c);
        debug_assert_eq!(check, o, "witness re-evaluation disagrees");
        candidates.push((check, c));
    }
    let front = ParetoFront::from_candidates(candidates);
    if front.is_empty() {
        return Err(SolveError::NoFeasibleSolution);
    }
    Ok(ExactFront { front, leaves, search_space })
}
