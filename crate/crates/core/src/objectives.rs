//! Cost and latency objectives and the placement constraints.
//!
//! A [`Placement`] is the decision for one service graph: the selected
//! decomposition plus a host for every one of its NFs. Constraints are checked
//! jointly over the placements of all service graphs because hosts are shared.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::model::{Decomposition, LatencyMatrix, NetworkFunction, NfType, PhysicalNetwork, PhysicalNode, ServiceGraph};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    /// Position of the service graph in the instance.
    pub sg: usize,
    /// Position of the selected decomposition within the service graph.
    pub dec: usize,
    /// NF position within the decomposition -> host position in the network.
    pub assignment: BTreeMap<usize, usize>,
}

impl Placement {
    pub fn new(sg: usize, dec: usize, hosts: impl IntoIterator<Item = usize>) -> Self {
        Placement { sg, dec, assignment: hosts.into_iter().enumerate().collect() }
    }

    pub fn used_hosts(&self) -> BTreeSet<usize> {
        self.assignment.values().copied().collect()
    }
}

/// Objective pair of a candidate; infeasible candidates carry `+inf` in both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveValues<T> {
    pub cost: T,
    pub latency: T,
    pub feasible: bool,
}

impl<T: Scalar> ObjectiveValues<T> {
    pub fn feasible(cost: T, latency: T) -> Self {
        ObjectiveValues { cost, latency, feasible: true }
    }

    pub fn infeasible() -> Self {
        ObjectiveValues { cost: T::infinity(), latency: T::infinity(), feasible: false }
    }

    pub fn get(&self, objective: usize) -> T {
        match objective {
            0 => self.cost,
            _ => self.latency,
        }
    }
}

/// Pareto dominance for minimization. Any feasible point dominates any
/// infeasible one; infeasible points never dominate each other.
pub fn dominates<T: Scalar>(a: &ObjectiveValues<T>, b: &ObjectiveValues<T>) -> bool {
    match (a.feasible, b.feasible) {
        (false, _) => false,
        (true, false) => true,
        (true, true) => {
            a.cost <= b.cost && a.latency <= b.latency && (a.cost < b.cost || a.latency < b.latency)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObjectiveError {
    #[error("node {node} cannot host NF {nf} of type {nf_type}")]
    UnsupportedType { nf: u32, nf_type: NfType, node: u32 },
    #[error("placement refers to unknown host position {0}")]
    UnknownHost(usize),
    #[error("placement refers to unknown service graph {sg} / decomposition {dec}")]
    UnknownDecomposition { sg: usize, dec: usize },
    #[error("placement of service graph {sg} does not map NF position {nf}")]
    UnmappedNf { sg: usize, nf: usize },
}

/// `c·C_cost + m·M_cost + s·S_cost`.
pub fn nf_node_cost<T: Scalar>(nf: &NetworkFunction, node: &PhysicalNode<T>) -> Result<T, ObjectiveError> {
    if !node.supports(nf.nf_type) {
        return Err(ObjectiveError::UnsupportedType { nf: nf.id, nf_type: nf.nf_type, node: node.id });
    }
    Ok(raw_cost(nf, node))
}

#[inline]
pub(crate) fn raw_cost<T: Scalar>(nf: &NetworkFunction, node: &PhysicalNode<T>) -> T {
    T::from_u64_lossy(nf.cpu) * node.cpu_cost
        + T::from_u64_lossy(nf.mem) * node.mem_cost
        + T::from_u64_lossy(nf.storage) * node.storage_cost
}

/// Sums the four per-type partial costs in a fixed order (VM, Process, IO, Hardware).
#[inline]
pub(crate) fn sum_type_costs<T: Scalar>(by_type: &[T; 4]) -> T {
    ((by_type[0] + by_type[1]) + by_type[2]) + by_type[3]
}

pub(crate) fn decomposition<'a>(sgs: &'a [ServiceGraph], sg: usize, dec: usize) -> Result<&'a Decomposition, ObjectiveError> {
    sgs.get(sg)
        .and_then(|s| s.decompositions.get(dec))
        .ok_or(ObjectiveError::UnknownDecomposition { sg, dec })
}

/// Cost of one placement split by NF type, in `NfType::index` order.
pub fn cost_by_type<T: Scalar>(pl: &Placement, net: &PhysicalNetwork<T>, sgs: &[ServiceGraph]) -> Result<[T; 4], ObjectiveError> {
    let dc = decomposition(sgs, pl.sg, pl.dec)?;
    let mut by_type = [T::zero(); 4];
    for (&i, &host) in &pl.assignment {
        let nf = dc.nfs.get(i).ok_or(ObjectiveError::UnmappedNf { sg: pl.sg, nf: i })?;
        let node = net.nodes.get(host).ok_or(ObjectiveError::UnknownHost(host))?;
        by_type[nf.nf_type.index()] = by_type[nf.nf_type.index()] + nf_node_cost(nf, node)?;
    }
    Ok(by_type)
}

/// Mapping cost of one placement: the sum of the four per-type sums.
pub fn total_cost<T: Scalar>(pl: &Placement, net: &PhysicalNetwork<T>, sgs: &[ServiceGraph]) -> Result<T, ObjectiveError> {
    cost_by_type(pl, net, sgs).map(|c| sum_type_costs(&c))
}

/// Latency of one placement: sum of `L(host(i), host(i+1))` over consecutive
/// NFs of the decomposition, or over its declared edges when `over_edges`.
pub fn total_latency<T: Scalar>(
    pl: &Placement,
    lat: &LatencyMatrix<T>,
    sgs: &[ServiceGraph],
    over_edges: bool,
) -> Result<T, ObjectiveError> {
    let dc = decomposition(sgs, pl.sg, pl.dec)?;
    let host = |i: usize| -> Result<usize, ObjectiveError> {
        let h = *pl.assignment.get(&i).ok_or(ObjectiveError::UnmappedNf { sg: pl.sg, nf: i })?;
        if h >= lat.len() {
            return Err(ObjectiveError::UnknownHost(h));
        }
        Ok(h)
    };
    let mut total = T::zero();
    if over_edges {
        for &(a, b) in &dc.edges {
            total = total + lat.get(host(a)?, host(b)?);
        }
    } else {
        for i in 1..dc.nfs.len() {
            total = total + lat.get(host(i - 1)?, host(i)?);
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resources {
    pub cpu: u64,
    pub mem: u64,
    pub storage: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resource {
    Cpu,
    Mem,
    Storage,
}

/// Remaining capacity of every host.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourceLedger {
    pub free: Vec<Resources>,
}

impl ResourceLedger {
    pub fn full<T: Scalar>(net: &PhysicalNetwork<T>) -> Self {
        ResourceLedger {
            free: net.nodes.iter().map(|n| Resources { cpu: n.cpu, mem: n.mem, storage: n.storage }).collect(),
        }
    }

    /// Subtracts the demand of `nf` from `host` when it fits; leaves the
    /// ledger untouched otherwise.
    #[inline]
    pub fn try_reserve(&mut self, host: usize, nf: &NetworkFunction) -> bool {
        let f = &mut self.free[host];
        if nf.cpu <= f.cpu && nf.mem <= f.mem && nf.storage <= f.storage {
            f.cpu -= nf.cpu;
            f.mem -= nf.mem;
            f.storage -= nf.storage;
            true
        } else {
            false
        }
    }

    #[inline]
    pub fn release(&mut self, host: usize, nf: &NetworkFunction) {
        let f = &mut self.free[host];
        f.cpu += nf.cpu;
        f.mem += nf.mem;
        f.storage += nf.storage;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapacityViolation {
    pub node: u32,
    pub resource: Resource,
    pub demand: u64,
    pub capacity: u64,
}

/// Per-host capacity check over the union of all placements.
pub fn check_capacity<T: Scalar>(
    placements: &[Placement],
    net: &PhysicalNetwork<T>,
    sgs: &[ServiceGraph],
) -> Result<ResourceLedger, Vec<CapacityViolation>> {
    let mut demand = vec![Resources { cpu: 0, mem: 0, storage: 0 }; net.nodes.len()];
    let mut structural = Vec::new();
    for pl in placements {
        let Ok(dc) = decomposition(sgs, pl.sg, pl.dec) else { continue };
        for (&i, &host) in &pl.assignment {
            match (dc.nfs.get(i), demand.get_mut(host)) {
                (Some(nf), Some(d)) => {
                    d.cpu += nf.cpu;
                    d.mem += nf.mem;
                    d.storage += nf.storage;
                }
                _ => structural.push(i),
            }
        }
    }
    let mut violations = Vec::new();
    let mut ledger = ResourceLedger::full(net);
    for (j, node) in net.nodes.iter().enumerate() {
        let d = demand[j];
        for (resource, dem, cap) in [
            (Resource::Cpu, d.cpu, node.cpu),
            (Resource::Mem, d.mem, node.mem),
            (Resource::Storage, d.storage, node.storage),
        ] {
            if dem > cap {
                violations.push(CapacityViolation { node: node.id, resource, demand: dem, capacity: cap });
            }
        }
        if violations.is_empty() {
            let f = &mut ledger.free[j];
            f.cpu -= d.cpu;
            f.mem -= d.mem;
            f.storage -= d.storage;
        }
    }
    if violations.is_empty() {
        Ok(ledger)
    } else {
        Err(violations)
    }
}

/// True iff the placement maps every NF of its decomposition exactly once and
/// nothing else.
pub fn check_mapping_once(pl: &Placement, sgs: &[ServiceGraph]) -> bool {
    let Ok(dc) = decomposition(sgs, pl.sg, pl.dec) else { return false };
    pl.assignment.len() == dc.nfs.len() && pl.assignment.keys().enumerate().all(|(k, &i)| k == i)
}

/// `f2 <= target`; always true without a target.
pub fn check_latency_target<T: Scalar>(latency: T, target: Option<T>) -> bool {
    target.map_or(true, |t| latency <= t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig<T> {
    pub latency_over_edges: bool,
    pub l_target: Option<T>,
}

impl<T> Default for EvalConfig<T> {
    fn default() -> Self {
        EvalConfig { latency_over_edges: false, l_target: None }
    }
}

/// Evaluates one placement per service graph. Any constraint failure yields
/// the infeasible sentinel.
pub fn evaluate<T: Scalar>(
    placements: &[Placement],
    net: &PhysicalNetwork<T>,
    lat: &LatencyMatrix<T>,
    sgs: &[ServiceGraph],
    cfg: &EvalConfig<T>,
) -> ObjectiveValues<T> {
    let selected: BTreeSet<usize> = placements.iter().map(|p| p.sg).collect();
    if selected.len() != placements.len() || selected.len() != sgs.len() {
        return ObjectiveValues::infeasible();
    }
    if !placements.iter().all(|p| check_mapping_once(p, sgs)) {
        return ObjectiveValues::infeasible();
    }
    if check_capacity(placements, net, sgs).is_err() {
        return ObjectiveValues::infeasible();
    }
    let mut ordered: Vec<&Placement> = placements.iter().collect();
    ordered.sort_by_key(|p| p.sg);
    let mut cost = T::zero();
    let mut latency = T::zero();
    for pl in ordered {
        match (total_cost(pl, net, sgs), total_latency(pl, lat, sgs, cfg.latency_over_edges)) {
            (Ok(c), Ok(l)) => {
                cost = cost + c;
                latency = latency + l;
            }
            _ => return ObjectiveValues::infeasible(),
        }
    }
    if !check_latency_target(latency, cfg.l_target) {
        return ObjectiveValues::infeasible();
    }
    ObjectiveValues::feasible(cost, latency)
}
