//! Gene, chromosome and solution representation plus random construction.
//!
//! A chromosome is the concatenation of one segment per service graph, in
//! service-graph order. Segment `k` holds one gene per NF of the decomposition
//! chosen for service graph `k`, in NF order. All identifiers in a gene are
//! positions into the instance vectors.

use std::collections::{BTreeMap, HashSet};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Instance, NfType, ServiceGraph};
use crate::objectives::{ObjectiveValues, Placement};
use crate::problem::Problem;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Gene {
    pub host: usize,
    pub nf: usize,
    pub dec: usize,
    pub sg: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Chromosome {
    genes: Vec<Gene>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodingError {
    #[error("malformed chromosome: {0}")]
    MalformedChromosome(String),
    #[error("no feasible initial solution after {attempts} attempts")]
    InitExhausted { attempts: usize },
}

fn malformed(msg: impl Into<String>) -> EncodingError {
    EncodingError::MalformedChromosome(msg.into())
}

impl Chromosome {
    pub fn new(genes: Vec<Gene>) -> Self {
        Chromosome { genes }
    }

    pub fn genes(&self) -> &[Gene] {
        &self.genes
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    /// Swaps the hosts of two gene positions.
    pub fn swap_hosts(&mut self, j: usize, k: usize) {
        let h = self.genes[j].host;
        self.genes[j].host = self.genes[k].host;
        self.genes[k].host = h;
    }

    /// Consecutive runs of genes sharing a service graph.
    pub fn segments(&self) -> impl Iterator<Item = &[Gene]> {
        self.genes.chunk_by(|a, b| a.sg == b.sg)
    }

    /// Selected decomposition per segment, in segment order.
    pub fn decisions(&self) -> Vec<(usize, usize)> {
        self.segments().map(|s| (s[0].sg, s[0].dec)).collect()
    }

    pub fn same_decompositions(&self, other: &Chromosome) -> bool {
        self.decisions() == other.decisions()
    }

    pub fn used_hosts(&self) -> usize {
        self.genes.iter().map(|g| g.host).collect::<HashSet<_>>().len()
    }

    /// Checks the structural invariants against an instance: one segment per
    /// service graph in order, one decomposition per segment, every NF of that
    /// decomposition exactly once in NF order, hosts in range.
    pub fn check<T: Scalar>(&self, inst: &Instance<T>) -> Result<(), EncodingError> {
        check_genes(&self.genes, &inst.service_graphs, inst.physical_network.nodes.len())
    }

    pub fn from_placements(placements: &[Placement]) -> Result<Self, EncodingError> {
        let mut ordered: Vec<&Placement> = placements.iter().collect();
        ordered.sort_by_key(|p| p.sg);
        let mut genes = Vec::new();
        for (k, pl) in ordered.iter().enumerate() {
            if pl.sg != k {
                return Err(malformed(format!("placement for service graph {k} missing or repeated")));
            }
            for (pos, (&nf, &host)) in pl.assignment.iter().enumerate() {
                if nf != pos {
                    return Err(malformed(format!("service graph {k} does not map NF {pos}")));
                }
                genes.push(Gene { host, nf, dec: pl.dec, sg: pl.sg });
            }
        }
        Ok(Chromosome { genes })
    }

    pub fn to_placements<T: Scalar>(&self, inst: &Instance<T>) -> Result<Vec<Placement>, EncodingError> {
        self.check(inst)?;
        Ok(self
            .segments()
            .map(|s| Placement {
                sg: s[0].sg,
                dec: s[0].dec,
                assignment: s.iter().map(|g| (g.nf, g.host)).collect::<BTreeMap<_, _>>(),
            })
            .collect())
    }
}

pub(crate) fn check_genes(genes: &[Gene], sgs: &[ServiceGraph], num_hosts: usize) -> Result<(), EncodingError> {
    let mut pos = 0;
    for (k, sg) in sgs.iter().enumerate() {
        let Some(first) = genes.get(pos) else {
            return Err(malformed(format!("no genes for service graph {k}")));
        };
        if first.sg != k {
            return Err(malformed(format!("expected service graph {k} at gene {pos}, found {}", first.sg)));
        }
        let dec = first.dec;
        let dc = sg
            .decompositions
            .get(dec)
            .ok_or_else(|| malformed(format!("service graph {k} has no decomposition {dec}")))?;
        for nf in 0..dc.nfs.len() {
            let g = genes
                .get(pos)
                .ok_or_else(|| malformed(format!("service graph {k} is missing NF {nf}")))?;
            if g.sg != k {
                return Err(malformed(format!("service graph {k} is missing NF {nf}")));
            }
            if g.dec != dec {
                return Err(malformed(format!("service graph {k} mixes decompositions {dec} and {}", g.dec)));
            }
            if g.nf != nf {
                return Err(malformed(format!("service graph {k}: expected NF {nf} at gene {pos}, found {}", g.nf)));
            }
            if g.host >= num_hosts {
                return Err(malformed(format!("gene {pos} refers to unknown host {}", g.host)));
            }
            pos += 1;
        }
    }
    if pos != genes.len() {
        let g = genes[pos];
        return Err(malformed(format!(
            "unexpected gene at position {pos} (sg {}, dec {}, nf {})",
            g.sg, g.dec, g.nf
        )));
    }
    Ok(())
}

/// One individual: a chromosome with its objectives and sorting metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution<T> {
    pub chromosome: Chromosome,
    pub objectives: ObjectiveValues<T>,
    /// Front index (1-based); `None` until sorted.
    pub rank: Option<usize>,
    pub crowding_distance: T,
    pub num_used_hosts: usize,
}

impl<T: Scalar> Solution<T> {
    pub fn new(chromosome: Chromosome, objectives: ObjectiveValues<T>) -> Self {
        let num_used_hosts = chromosome.used_hosts();
        Solution { chromosome, objectives, rank: None, crowding_distance: T::zero(), num_used_hosts }
    }

    pub fn evaluated(problem: &Problem<T>, chromosome: Chromosome) -> Self {
        let objectives = problem.evaluate(&chromosome);
        Self::new(chromosome, objectives)
    }

    pub fn cost(&self) -> T {
        self.objectives.cost
    }

    pub fn latency(&self) -> T {
        self.objectives.latency
    }

    pub fn is_feasible(&self) -> bool {
        self.objectives.feasible
    }

    /// Drops rank and crowding distance.
    pub fn unsorted(mut self) -> Self {
        self.rank = None;
        self.crowding_distance = T::zero();
        self
    }
}

/// Per-SG placements of a solution.
pub fn to_placement<T: Scalar>(sol: &Solution<T>, inst: &Instance<T>) -> Result<Vec<Placement>, EncodingError> {
    sol.chromosome.to_placements(inst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NfDescriptor {
    pub index: usize,
    pub id: u32,
    pub nf_type: NfType,
    pub cpu: u64,
    pub mem: u64,
    pub storage: u64,
}

/// Rows are decompositions, columns NF slots; shorter rows are padded with `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionMatrix {
    rows: Vec<Vec<Option<NfDescriptor>>>,
    width: usize,
}

impl DecompositionMatrix {
    pub fn new(sg: &ServiceGraph) -> Self {
        let width = sg.max_nfs();
        let rows = sg
            .decompositions
            .iter()
            .map(|dc| {
                let mut row: Vec<Option<NfDescriptor>> = dc
                    .nfs
                    .iter()
                    .enumerate()
                    .map(|(index, nf)| {
                        Some(NfDescriptor {
                            index,
                            id: nf.id,
                            nf_type: nf.nf_type,
                            cpu: nf.cpu,
                            mem: nf.mem,
                            storage: nf.storage,
                        })
                    })
                    .collect();
                row.resize(width, None);
                row
            })
            .collect();
        DecompositionMatrix { rows, width }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn row(&self, r: usize) -> &[Option<NfDescriptor>] {
        &self.rows[r]
    }

    /// The NFs of row `r`, padding stripped.
    pub fn row_nfs(&self, r: usize) -> impl Iterator<Item = &NfDescriptor> {
        self.rows[r].iter().map_while(Option::as_ref)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitOptions {
    pub max_init_retries: usize,
    pub strict_init: bool,
}

impl Default for InitOptions {
    fn default() -> Self {
        InitOptions { max_init_retries: 50, strict_init: false }
    }
}

/// Draws one decomposition row per service graph uniformly, then a uniformly
/// random type-compatible host for each NF of it.
pub fn random_chromosome<T: Scalar, R: Rng + ?Sized>(problem: &Problem<T>, rng: &mut R) -> Chromosome {
    let mut genes = Vec::with_capacity(problem.instance().total_nfs_upper_bound());
    let all_hosts = problem.network().nodes.len();
    for (sg, matrix) in problem.decomposition_matrices().iter().enumerate() {
        let dec = rng.gen_range(0..matrix.num_rows());
        for d in matrix.row_nfs(dec) {
            let hosts = problem.hosts_for(d.nf_type);
            let host = if hosts.is_empty() { rng.gen_range(0..all_hosts) } else { hosts[rng.gen_range(0..hosts.len())] };
            genes.push(Gene { host, nf: d.index, dec, sg });
        }
    }
    Chromosome { genes }
}

/// Random solution with bounded retries for feasibility. After
/// `1 + max_init_retries` infeasible draws the last candidate is returned
/// (flagged infeasible), or `InitExhausted` when `strict_init` is set.
pub fn random_solution<T: Scalar, R: Rng + ?Sized>(
    problem: &Problem<T>,
    opts: &InitOptions,
    rng: &mut R,
) -> Result<Solution<T>, EncodingError> {
    let attempts = opts.max_init_retries + 1;
    let mut last = None;
    for _ in 0..attempts {
        let sol = Solution::evaluated(problem, random_chromosome(problem, rng));
        if sol.is_feasible() {
            return Ok(sol);
        }
        last = Some(sol);
    }
    if opts.strict_init {
        return Err(EncodingError::InitExhausted { attempts });
    }
    Ok(last.expect("at least one attempt"))
}
