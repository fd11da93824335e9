//! Seeded random instances: a connected physical graph of identical hosts and
//! service graphs whose NF demands are drawn from fixed per-type tables.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::model::{Decomposition, Instance, NetworkFunction, NfType, PhysicalLink, PhysicalNetwork, PhysicalNode, ServiceGraph};
use crate::rng::{seeded, SolverRng};
use crate::scalar::Scalar;

pub const GENERATOR_VERSION: &str = concat!("modmvnf-generator/", env!("CARGO_PKG_VERSION"));

/// Demand multisets per NF type, indexed by [`NfType::index`]. Duplicate
/// entries weight the draw.
pub struct ResourceTables;

impl ResourceTables {
    pub const CPU: [&'static [u64]; 4] = [
        &[250, 500, 750, 750, 1000, 1000],
        &[250, 500, 750, 750, 1000, 1000, 1000],
        &[250, 500, 750, 1000],
        &[250, 250, 250, 500, 500, 750, 1000],
    ];
    pub const MEM: [&'static [u64]; 4] = [
        &[128, 256, 256, 512, 512, 512],
        &[128, 256, 512],
        &[128, 256, 512],
        &[128, 256, 512],
    ];
    pub const STORAGE: [&'static [u64]; 4] = [
        &[256, 512, 1024, 1024],
        &[256, 256, 256, 512, 512, 1024],
        &[256, 512, 1024],
        &[256, 512, 512, 1024, 1024, 1024],
    ];

    pub fn cpu(t: NfType) -> &'static [u64] {
        Self::CPU[t.index()]
    }

    pub fn mem(t: NfType) -> &'static [u64] {
        Self::MEM[t.index()]
    }

    pub fn storage(t: NfType) -> &'static [u64] {
        Self::STORAGE[t.index()]
    }
}

/// Draws `(cpu, mem, storage)` for an NF of type `t`.
pub fn draw_demand<R: Rng + ?Sized>(t: NfType, rng: &mut R) -> (u64, u64, u64) {
    let pick = |table: &[u64], rng: &mut R| table[rng.gen_range(0..table.len())];
    let cpu = pick(ResourceTables::cpu(t), rng);
    let mem = pick(ResourceTables::mem(t), rng);
    let storage = pick(ResourceTables::storage(t), rng);
    (cpu, mem, storage)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UnitCostModel {
    /// The same unit costs on every node.
    Fixed { cpu: f64, mem: f64, storage: f64 },
    /// Independent integer unit costs per node and resource, uniform in `[min, max]`.
    Uniform { min: u32, max: u32 },
}

impl Default for UnitCostModel {
    fn default() -> Self {
        UnitCostModel::Fixed { cpu: 3.0, mem: 2.0, storage: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorSpec {
    pub num_nodes: usize,
    pub node_cpu: u64,
    pub node_mem: u64,
    pub node_storage: u64,
    pub unit_costs: UnitCostModel,
    pub link_probability: f64,
    /// Inclusive range of integer link delays.
    pub link_delay_range: (u64, u64),
    pub num_sgs: usize,
    /// Upper bound on decompositions per SG; the count is drawn from `1..=max`.
    pub decompositions_per_sg: usize,
    pub min_nfs_per_decomposition: usize,
    pub max_nfs_per_decomposition: usize,
    /// Random tree decompositions instead of chains.
    pub branching: bool,
    pub l_target: Option<f64>,
    pub seed: u64,
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        GeneratorSpec {
            num_nodes: 10,
            node_cpu: 1000,
            node_mem: 1024,
            node_storage: 16_000_000,
            unit_costs: UnitCostModel::default(),
            link_probability: 0.4,
            link_delay_range: (1, 10),
            num_sgs: 2,
            decompositions_per_sg: 4,
            min_nfs_per_decomposition: 1,
            max_nfs_per_decomposition: 10,
            branching: false,
            l_target: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GeneratorError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<(), GeneratorError> {
        let bad = |m: &str| Err(GeneratorError::InvalidSpec(m.to_string()));
        if self.num_nodes == 0 {
            return bad("num_nodes must be positive");
        }
        if self.node_cpu == 0 || self.node_mem == 0 || self.node_storage == 0 {
            return bad("node capacities must be positive");
        }
        match self.unit_costs {
            UnitCostModel::Fixed { cpu, mem, storage } => {
                if [cpu, mem, storage].iter().any(|c| !(c.is_finite() && *c > 0.0)) {
                    return bad("unit costs must be positive");
                }
            }
            UnitCostModel::Uniform { min, max } => {
                if min == 0 || min > max {
                    return bad("uniform unit cost range must satisfy 0 < min <= max");
                }
            }
        }
        if !(0.0..=1.0).contains(&self.link_probability) {
            return bad("link_probability must be in [0, 1]");
        }
        let (dmin, dmax) = self.link_delay_range;
        if dmin == 0 || dmin > dmax {
            return bad("link_delay_range must satisfy 0 < min <= max");
        }
        if self.num_sgs == 0 {
            return bad("num_sgs must be positive");
        }
        if !(1..=4).contains(&self.decompositions_per_sg) {
            return bad("decompositions_per_sg must be in 1..=4");
        }
        if self.min_nfs_per_decomposition == 0
            || self.min_nfs_per_decomposition > self.max_nfs_per_decomposition
            || self.max_nfs_per_decomposition > 10
        {
            return bad("NFs per decomposition must satisfy 1 <= min <= max <= 10");
        }
        if self.l_target.is_some_and(|t| !(t.is_finite() && t >= 0.0)) {
            return bad("l_target must be finite and non-negative");
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Tiny,
    Small10,
    Small12,
    Large,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Tiny, Preset::Small10, Preset::Small12, Preset::Large];

    pub fn spec(self) -> GeneratorSpec {
        let base = GeneratorSpec::default();
        match self {
            Preset::Tiny => GeneratorSpec {
                num_nodes: 5,
                num_sgs: 2,
                decompositions_per_sg: 3,
                max_nfs_per_decomposition: 5,
                ..base
            },
            Preset::Small10 => GeneratorSpec { num_nodes: 10, num_sgs: 2, max_nfs_per_decomposition: 3, ..base },
            Preset::Small12 => GeneratorSpec { num_nodes: 12, num_sgs: 2, max_nfs_per_decomposition: 3, ..base },
            Preset::Large => GeneratorSpec { num_nodes: 30, num_sgs: 10, max_nfs_per_decomposition: 3, ..base },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Tiny => "tiny",
            Preset::Small10 => "small10",
            Preset::Small12 => "small12",
            Preset::Large => "large",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| GeneratorError::InvalidSpec(format!("unknown preset `{s}`")))
    }
}

/// The two evaluation scenarios: (small, large).
pub fn reference_scenarios() -> (GeneratorSpec, GeneratorSpec) {
    (Preset::Small10.spec(), Preset::Large.spec())
}

fn draw_topology(spec: &GeneratorSpec, rng: &mut SolverRng) -> Vec<(usize, usize, u64)> {
    let n = spec.num_nodes;
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut tree: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let j = order[rng.gen_range(0..i)];
        let e = (order[i].min(j), order[i].max(j));
        tree.insert(e);
        edges.insert(e);
    }
    for a in 0..n {
        for b in a + 1..n {
            if !tree.contains(&(a, b)) && rng.gen_bool(spec.link_probability) {
                edges.insert((a, b));
            }
        }
    }
    if n >= 4 {
        let complete = n * (n - 1) / 2;
        if edges.len() == complete {
            let extra: Vec<(usize, usize)> = edges.difference(&tree).copied().collect();
            let e = extra[rng.gen_range(0..extra.len())];
            edges.remove(&e);
        } else if edges.len() == n - 1 {
            let mut degree = vec![0usize; n];
            for &(a, b) in &edges {
                degree[a] += 1;
                degree[b] += 1;
            }
            if degree.iter().all(|&d| d <= 2) {
                let missing: Vec<(usize, usize)> =
                    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|e| !edges.contains(e)).collect();
                edges.insert(missing[rng.gen_range(0..missing.len())]);
            }
        }
    }
    let (dmin, dmax) = spec.link_delay_range;
    edges.into_iter().map(|(a, b)| (a, b, rng.gen_range(dmin..=dmax))).collect()
}

/// Generates an instance from `spec`; a pure function of the spec.
pub fn generate<T: Scalar>(spec: &GeneratorSpec) -> Result<Instance<T>, GeneratorError> {
    spec.validate()?;
    let mut rng = seeded(spec.seed);

    let nodes = (0..spec.num_nodes)
        .map(|i| {
            let (cpu_cost, mem_cost, storage_cost) = match spec.unit_costs {
                UnitCostModel::Fixed { cpu, mem, storage } => (cpu, mem, storage),
                UnitCostModel::Uniform { min, max } => (
                    f64::from(rng.gen_range(min..=max)),
                    f64::from(rng.gen_range(min..=max)),
                    f64::from(rng.gen_range(min..=max)),
                ),
            };
            PhysicalNode {
                id: i as u32,
                cpu: spec.node_cpu,
                mem: spec.node_mem,
                storage: spec.node_storage,
                cpu_cost: T::from_f64_lossy(cpu_cost),
                mem_cost: T::from_f64_lossy(mem_cost),
                storage_cost: T::from_f64_lossy(storage_cost),
                types: NfType::ALL.into_iter().collect(),
            }
        })
        .collect();

    let links = draw_topology(spec, &mut rng)
        .into_iter()
        .map(|(a, b, d)| PhysicalLink { a: a as u32, b: b as u32, delay: T::from_u64_lossy(d) })
        .collect();

    let service_graphs = (0..spec.num_sgs)
        .map(|sg| {
            let num_dec = rng.gen_range(1..=spec.decompositions_per_sg);
            let decompositions = (0..num_dec)
                .map(|dec| {
                    let k = rng.gen_range(spec.min_nfs_per_decomposition..=spec.max_nfs_per_decomposition);
                    let nfs: Vec<NetworkFunction> = (0..k)
                        .map(|i| {
                            let nf_type = NfType::ALL[rng.gen_range(0..4)];
                            let (cpu, mem, storage) = draw_demand(nf_type, &mut rng);
                            NetworkFunction { id: i as u32, nf_type, cpu, mem, storage }
                        })
                        .collect();
                    if spec.branching {
                        let edges = (1..k).map(|i| (rng.gen_range(0..i), i)).collect();
                        Decomposition { id: dec as u32, nfs, edges }
                    } else {
                        Decomposition::chain(dec as u32, nfs)
                    }
                })
                .collect();
            ServiceGraph { id: sg as u32, decompositions }
        })
        .collect();

    let metadata = json!({
        "generator_version": GENERATOR_VERSION,
        "seed": spec.seed,
        "spec": spec,
        "units": {
            "cpu": "MIPS",
            "mem": "MB (1 GB = 1024 MB)",
            "storage": "MB (16 TB = 16e6 MB)",
        },
    });

    Ok(Instance {
        physical_network: PhysicalNetwork { nodes, links },
        service_graphs,
        l_target: spec.l_target.map(T::from_f64_lossy),
        metadata: Some(metadata),
    })
}
