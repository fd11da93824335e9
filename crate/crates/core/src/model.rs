//! Physical infrastructure, service requests and shortest-path latencies.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

/// Implementation technique of a primitive network function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NfType {
    #[serde(rename = "VM")]
    Vm,
    #[serde(rename = "Process")]
    Process,
    #[serde(rename = "IO")]
    Io,
    #[serde(rename = "Hardware")]
    Hardware,
}

impl NfType {
    pub const ALL: [NfType; 4] = [NfType::Vm, NfType::Process, NfType::Io, NfType::Hardware];

    pub fn index(self) -> usize {
        match self {
            NfType::Vm => 0,
            NfType::Process => 1,
            NfType::Io => 2,
            NfType::Hardware => 3,
        }
    }
}

impl fmt::Display for NfType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NfType::Vm => "VM",
            NfType::Process => "Process",
            NfType::Io => "IO",
            NfType::Hardware => "Hardware",
        };
        f.write_str(s)
    }
}

/// A primitive NF with its resource demands (MIPS, MB, MB).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFunction {
    pub id: u32,
    #[serde(rename = "type")]
    pub nf_type: NfType,
    pub cpu: u64,
    pub mem: u64,
    pub storage: u64,
}

/// One expansion of a service graph. `nfs` order is the chain order used by
/// the latency objective.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Decomposition {
    pub id: u32,
    pub nfs: Vec<NetworkFunction>,
    pub edges: Vec<(usize, usize)>,
}

impl Decomposition {
    /// A linear chain `0 - 1 - ... - n-1` over `nfs`.
    pub fn chain(id: u32, nfs: Vec<NetworkFunction>) -> Self {
        let edges = (1..nfs.len()).map(|i| (i - 1, i)).collect();
        Decomposition { id, nfs, edges }
    }

    pub fn len(&self) -> usize {
        self.nfs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nfs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceGraph {
    pub id: u32,
    pub decompositions: Vec<Decomposition>,
}

impl ServiceGraph {
    pub fn max_nfs(&self) -> usize {
        self.decompositions.iter().map(Decomposition::len).max().unwrap_or(0)
    }
}

fn all_types() -> BTreeSet<NfType> {
    NfType::ALL.into_iter().collect()
}

/// A host with capacities (MIPS, MB, MB) and per-unit prices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalNode<T> {
    pub id: u32,
    pub cpu: u64,
    pub mem: u64,
    pub storage: u64,
    pub cpu_cost: T,
    pub mem_cost: T,
    pub storage_cost: T,
    #[serde(default = "all_types")]
    pub types: BTreeSet<NfType>,
}

impl<T: Scalar> PhysicalNode<T> {
    pub fn supports(&self, t: NfType) -> bool {
        self.types.contains(&t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalLink<T> {
    pub a: u32,
    pub b: u32,
    pub delay: T,
}

/// Undirected host graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalNetwork<T> {
    pub nodes: Vec<PhysicalNode<T>>,
    pub links: Vec<PhysicalLink<T>>,
}

impl<T: Scalar> PhysicalNetwork<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_map(&self) -> HashMap<u32, usize> {
        self.nodes.iter().enumerate().map(|(i, n)| (n.id, i)).collect()
    }
}

/// A problem instance as stored on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance<T> {
    pub physical_network: PhysicalNetwork<T>,
    pub service_graphs: Vec<ServiceGraph>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_target: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

impl<T: Scalar> Instance<T> {
    pub fn from_json_str(s: &str) -> Result<Self, ModelError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, ModelError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    /// Invariant violations of the instance, including the latency target.
    pub fn validate(&self) -> Vec<Violation> {
        let mut report = validate_instance(&self.physical_network, &self.service_graphs);
        if let Some(t) = self.l_target {
            if !(t >= T::zero()) {
                report.push(Violation::NegativeLatencyTarget);
            }
        }
        report
    }

    pub fn total_nfs_upper_bound(&self) -> usize {
        self.service_graphs.iter().map(ServiceGraph::max_nfs).sum()
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("physical network is disconnected: node {from} cannot reach node {to}")]
    DisconnectedNetwork { from: u32, to: u32 },
    #[error("link references unknown node {0}")]
    UnknownNode(u32),
    #[error("invalid instance: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidInstance(Vec<Violation>),
    #[error("instance json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("instance io: {0}")]
    Io(#[from] std::io::Error),
}

/// A broken instance invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("physical network has no nodes")]
    EmptyNetwork,
    #[error("duplicate physical node id {0}")]
    DuplicateNodeId(u32),
    #[error("node {node} has a zero capacity")]
    ZeroCapacity { node: u32 },
    #[error("node {node} has a non-positive unit cost")]
    NonPositiveUnitCost { node: u32 },
    #[error("node {node} supports no NF type")]
    EmptySupportedTypes { node: u32 },
    #[error("link {a}-{b} references an unknown node")]
    UnknownLinkEndpoint { a: u32, b: u32 },
    #[error("link {a}-{a} is a self-loop")]
    SelfLoopLink { a: u32 },
    #[error("duplicate link {a}-{b}")]
    DuplicateLink { a: u32, b: u32 },
    #[error("link {a}-{b} has a negative delay")]
    NegativeDelay { a: u32, b: u32 },
    #[error("link {a}-{b} has a non-finite delay")]
    NonFiniteDelay { a: u32, b: u32 },
    #[error("physical network is disconnected")]
    DisconnectedNetwork,
    #[error("instance has no service graphs")]
    NoServiceGraphs,
    #[error("duplicate service graph id {0}")]
    DuplicateServiceGraphId(u32),
    #[error("service graph {sg} has no decompositions")]
    EmptyDecompositionSet { sg: u32 },
    #[error("service graph {sg} repeats decomposition id {dec}")]
    DuplicateDecompositionId { sg: u32, dec: u32 },
    #[error("decomposition {sg}/{dec} has no NFs")]
    EmptyDecomposition { sg: u32, dec: u32 },
    #[error("decomposition {sg}/{dec} repeats NF id {nf}")]
    DuplicateNfId { sg: u32, dec: u32, nf: u32 },
    #[error("NF {sg}/{dec}/{nf} has a zero demand")]
    ZeroDemand { sg: u32, dec: u32, nf: u32 },
    #[error("decomposition {sg}/{dec} edge ({from},{to}) is out of range")]
    EdgeOutOfRange { sg: u32, dec: u32, from: usize, to: usize },
    #[error("decomposition {sg}/{dec} has a self-loop on NF index {index}")]
    DecompositionSelfLoop { sg: u32, dec: u32, index: usize },
    #[error("decomposition {sg}/{dec} is not connected")]
    DisconnectedDecomposition { sg: u32, dec: u32 },
    #[error("latency target is negative")]
    NegativeLatencyTarget,
}

/// Checks every model invariant; returns the violations found (empty when valid).
pub fn validate_instance<T: Scalar>(net: &PhysicalNetwork<T>, sgs: &[ServiceGraph]) -> Vec<Violation> {
    let mut out = Vec::new();

    if net.nodes.is_empty() {
        out.push(Violation::EmptyNetwork);
    }
    let mut seen = HashSet::new();
    for n in &net.nodes {
        if !seen.insert(n.id) {
            out.push(Violation::DuplicateNodeId(n.id));
        }
        if n.cpu == 0 || n.mem == 0 || n.storage == 0 {
            out.push(Violation::ZeroCapacity { node: n.id });
        }
        let costs = [n.cpu_cost, n.mem_cost, n.storage_cost];
        if costs.iter().any(|c| !(*c > T::zero()) || !c.is_finite()) {
            out.push(Violation::NonPositiveUnitCost { node: n.id });
        }
        if n.types.is_empty() {
            out.push(Violation::EmptySupportedTypes { node: n.id });
        }
    }

    let index = net.index_map();
    let mut link_keys = HashSet::new();
    let mut links_ok = true;
    for l in &net.links {
        if !index.contains_key(&l.a) || !index.contains_key(&l.b) {
            out.push(Violation::UnknownLinkEndpoint { a: l.a, b: l.b });
            links_ok = false;
            continue;
        }
        if l.a == l.b {
            out.push(Violation::SelfLoopLink { a: l.a });
        }
        if !link_keys.insert((l.a.min(l.b), l.a.max(l.b))) {
            out.push(Violation::DuplicateLink { a: l.a, b: l.b });
        }
        if !l.delay.is_finite() {
            out.push(Violation::NonFiniteDelay { a: l.a, b: l.b });
        } else if l.delay < T::zero() {
            out.push(Violation::NegativeDelay { a: l.a, b: l.b });
        }
    }
    if links_ok && !net.nodes.is_empty() {
        let edges = net.links.iter().map(|l| (index[&l.a], index[&l.b]));
        if !is_connected(net.nodes.len(), edges) {
            out.push(Violation::DisconnectedNetwork);
        }
    }

    if sgs.is_empty() {
        out.push(Violation::NoServiceGraphs);
    }
    let mut sg_ids = HashSet::new();
    for sg in sgs {
        if !sg_ids.insert(sg.id) {
            out.push(Violation::DuplicateServiceGraphId(sg.id));
        }
        if sg.decompositions.is_empty() {
            out.push(Violation::EmptyDecompositionSet { sg: sg.id });
        }
        let mut dec_ids = HashSet::new();
        for dc in &sg.decompositions {
            validate_decomposition(sg.id, dc, &mut dec_ids, &mut out);
        }
    }
    out
}

fn validate_decomposition(sg: u32, dc: &Decomposition, dec_ids: &mut HashSet<u32>, out: &mut Vec<Violation>) {
    let dec = dc.id;
    if !dec_ids.insert(dec) {
        out.push(Violation::DuplicateDecompositionId { sg, dec });
    }
    if dc.nfs.is_empty() {
        out.push(Violation::EmptyDecomposition { sg, dec });
        return;
    }
    let mut nf_ids = HashSet::new();
    for nf in &dc.nfs {
        if !nf_ids.insert(nf.id) {
            out.push(Violation::DuplicateNfId { sg, dec, nf: nf.id });
        }
        if nf.cpu == 0 || nf.mem == 0 || nf.storage == 0 {
            out.push(Violation::ZeroDemand { sg, dec, nf: nf.id });
        }
    }
    let n = dc.nfs.len();
    let mut edges_ok = true;
    for &(from, to) in &dc.edges {
        if from >= n || to >= n {
            out.push(Violation::EdgeOutOfRange { sg, dec, from, to });
            edges_ok = false;
        } else if from == to {
            out.push(Violation::DecompositionSelfLoop { sg, dec, index: from });
        }
    }
    if edges_ok && !is_connected(n, dc.edges.iter().copied()) {
        out.push(Violation::DisconnectedDecomposition { sg, dec });
    }
}

fn is_connected(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> bool {
    if n == 0 {
        return true;
    }
    let mut adj = vec![Vec::new(); n];
    for (a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Dense all-pairs shortest-path delays, indexed by node position.
#[derive(Debug, Clone, PartialEq)]
pub struct LatencyMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> LatencyMatrix<T> {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Scales every entry by `k`.
    pub fn scaled(&self, k: T) -> Self {
        LatencyMatrix { n: self.n, data: self.data.iter().map(|&d| d * k).collect() }
    }
}

#[derive(Clone, Copy)]
struct HeapEntry<T> {
    dist: T,
    node: usize,
}

impl<T: Scalar> PartialEq for HeapEntry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for HeapEntry<T> {}

impl<T: Scalar> PartialOrd for HeapEntry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for HeapEntry<T> {
    // min-heap on distance
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Runs Dijkstra from every node.
pub fn shortest_path_matrix<T: Scalar>(net: &PhysicalNetwork<T>) -> Result<LatencyMatrix<T>, ModelError> {
    let n = net.nodes.len();
    let index = net.index_map();
    let mut adj: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
    for l in &net.links {
        let a = *index.get(&l.a).ok_or(ModelError::UnknownNode(l.a))?;
        let b = *index.get(&l.b).ok_or(ModelError::UnknownNode(l.b))?;
        adj[a].push((b, l.delay));
        adj[b].push((a, l.delay));
    }

    let mut data = vec![T::infinity(); n * n];
    let mut heap = BinaryHeap::new();
    for src in 0..n {
        let dist = &mut data[src * n..(src + 1) * n];
        dist[src] = T::zero();
        heap.push(HeapEntry { dist: T::zero(), node: src });
        while let Some(HeapEntry { dist: d, node: u }) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &adj[u] {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(HeapEntry { dist: nd, node: v });
                }
            }
        }
        if let Some(to) = dist.iter().position(|d| !d.is_finite()) {
            return Err(ModelError::DisconnectedNetwork { from: net.nodes[src].id, to: net.nodes[to].id });
        }
    }
    // undirected graph: mirror to remove any asymmetric rounding
    for i in 0..n {
        for j in (i + 1)..n {
            let m = data[i * n + j].min(data[j * n + i]);
            data[i * n + j] = m;
            data[j * n + i] = m;
        }
    }
    Ok(LatencyMatrix { n, data })
}
