//! External-archive MOPSO baseline.
//!
//! Each service graph contributes one decomposition dimension over
//! `[0, n_dec)` followed by one host dimension over `[0, |N_p|)` per NF slot
//! of its widest decomposition. Positions decode by flooring and clamping;
//! slots beyond the chosen decomposition's length are carried but ignored.

use std::cmp::Ordering;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::encoding::{Chromosome, Gene, Solution};
use crate::front::ParetoFront;
use crate::nsga2::{crowding_distances, GenerationStats};
use crate::objectives::{dominates, ObjectiveValues};
use crate::problem::{Problem, SolveError};
use crate::rng::{seeded, SolverRng};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsoConfig {
    pub swarm_size: usize,
    pub iterations: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    pub archive_capacity: usize,
    pub personal_archive_capacity: usize,
    /// Stop as soon as this many objective evaluations have been spent.
    pub max_evaluations: Option<u64>,
    pub seed: u64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        PsoConfig {
            swarm_size: 60,
            iterations: 100,
            inertia: 0.7,
            cognitive: 1.5,
            social: 1.5,
            archive_capacity: 100,
            personal_archive_capacity: 5,
            max_evaluations: None,
            seed: 0,
        }
    }
}

impl PsoConfig {
    pub fn validate(&self) -> Result<(), SolveError> {
        let err = |m: &str| Err(SolveError::InvalidConfig(m.to_string()));
        if self.swarm_size == 0 {
            return err("swarm_size must be positive");
        }
        if !(0.0..=1.0).contains(&self.inertia) {
            return err("inertia must be in [0, 1]");
        }
        if !(self.cognitive > 0.0 && self.social > 0.0) || !self.cognitive.is_finite() || !self.social.is_finite() {
            return err("cognitive and social coefficients must be positive");
        }
        if self.archive_capacity < self.swarm_size {
            return err("archive_capacity must be at least swarm_size");
        }
        if self.personal_archive_capacity == 0 {
            return err("personal_archive_capacity must be positive");
        }
        Ok(())
    }
}

/// Layout of the continuous search space.
#[derive(Debug, Clone, PartialEq)]
pub struct Dimensions {
    /// Upper bound (exclusive) of every dimension.
    ranges: Vec<f64>,
    /// First dimension of each service graph's block.
    offsets: Vec<usize>,
}

impl Dimensions {
    pub fn new<T: Scalar>(problem: &Problem<T>) -> Self {
        let hosts = problem.network().nodes.len() as f64;
        let mut ranges = Vec::new();
        let mut offsets = Vec::new();
        for sg in problem.service_graphs() {
            offsets.push(ranges.len());
            ranges.push(sg.decompositions.len() as f64);
            ranges.extend(std::iter::repeat(hosts).take(sg.max_nfs()));
        }
        Dimensions { ranges, offsets }
    }

    pub fn len(&self) -> usize {
        self.ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn ranges(&self) -> &[f64] {
        &self.ranges
    }

    fn index(x: f64, range: f64) -> usize {
        let top = range as usize - 1;
        if x.is_nan() || x < 0.0 {
            0
        } else {
            (x.floor() as usize).min(top)
        }
    }

    /// Decodes a position into a canonical chromosome.
    pub fn decode<T: Scalar>(&self, problem: &Problem<T>, x: &[f64]) -> Chromosome {
        let mut genes = Vec::new();
        for (sg, (g, &off)) in problem.service_graphs().iter().zip(&self.offsets).enumerate() {
            let dec = Self::index(x[off], self.ranges[off]);
            for nf in 0..g.decompositions[dec].nfs.len() {
                let d = off + 1 + nf;
                genes.push(Gene { host: Self::index(x[d], self.ranges[d]), nf, dec, sg });
            }
        }
        Chromosome::new(genes)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveEntry<T> {
    pub position: Vec<f64>,
    pub solution: Solution<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Particle<T> {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub current: Solution<T>,
    /// Non-dominated personal bests, oldest first.
    pub personal_best: Vec<ArchiveEntry<T>>,
}

fn weakly_dominated_by<T: Scalar>(o: &ObjectiveValues<T>, members: &[ArchiveEntry<T>]) -> bool {
    members.iter().any(|m| {
        let a = &m.solution.objectives;
        dominates(a, o) || (a.cost == o.cost && a.latency == o.latency)
    })
}

/// Inserts a feasible entry not weakly dominated by any member, dropping the
/// members it dominates. Returns whether it was inserted.
fn offer<T: Scalar>(members: &mut Vec<ArchiveEntry<T>>, entry: &ArchiveEntry<T>) -> bool {
    let o = entry.solution.objectives;
    if !o.feasible || weakly_dominated_by(&o, members) {
        return false;
    }
    members.retain(|m| !dominates(&o, &m.solution.objectives));
    members.push(entry.clone());
    true
}

fn archive_crowding<T: Scalar>(members: &[ArchiveEntry<T>]) -> Vec<T> {
    let objs: Vec<ObjectiveValues<T>> = members.iter().map(|m| m.solution.objectives).collect();
    let idx: Vec<usize> = (0..objs.len()).collect();
    crowding_distances(&objs, &idx)
}

/// Adds to the external archive; over capacity, the most crowded member
/// (smallest crowding distance, lowest index on ties) is removed.
pub fn archive_insert<T: Scalar>(archive: &mut Vec<ArchiveEntry<T>>, entry: &ArchiveEntry<T>, capacity: usize) {
    if offer(archive, entry) && archive.len() > capacity {
        let d = archive_crowding(archive);
        let mut worst = 0;
        for i in 1..d.len() {
            if d[i].partial_cmp(&d[worst]) == Some(Ordering::Less) {
                worst = i;
            }
        }
        archive.remove(worst);
    }
}

fn personal_insert<T: Scalar>(p: &mut Particle<T>, capacity: usize) {
    let entry = ArchiveEntry { position: p.position.clone(), solution: p.current.clone() };
    if offer(&mut p.personal_best, &entry) && p.personal_best.len() > capacity {
        p.personal_best.remove(0);
    }
}

/// Binary tournament on archive crowding distance; `None` on an empty archive.
fn select_leader<T: Scalar>(archive: &[ArchiveEntry<T>], rng: &mut SolverRng) -> Option<usize> {
    match archive.len() {
        0 => None,
        1 => Some(0),
        n => {
            let d = archive_crowding(archive);
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            Some(if d[b] > d[a] { b } else { a })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput<T> {
    pub front: ParetoFront<T>,
    pub history: Vec<GenerationStats<T>>,
    pub evaluations: u64,
    /// Final external archive.
    pub archive: Vec<ArchiveEntry<T>>,
}

/// Runs the swarm for `cfg.iterations` iterations or until the evaluation
/// budget is spent, and returns the external archive as the front.
pub fn pso_run<T: Scalar>(problem: &Problem<T>, cfg: &PsoConfig) -> Result<RunOutput<T>, SolveError> {
    cfg.validate()?;
    let start = problem.evaluations();
    let spent = || problem.evaluations() - start;
    let exhausted = || cfg.max_evaluations.is_some_and(|m| spent() >= m);
    let dims = Dimensions::new(problem);
    let mut rng = seeded(cfg.seed);
    let mut archive: Vec<ArchiveEntry<T>> = Vec::new();
    let mut swarm: Vec<Particle<T>> = Vec::with_capacity(cfg.swarm_size);

    for _ in 0..cfg.swarm_size {
        if exhausted() {
            break;
        }
        let position: Vec<f64> = dims.ranges().iter().map(|&r| rng.gen_range(0.0..r)).collect();
        let current = Solution::evaluated(problem, dims.decode(problem, &position));
        let mut p = Particle { velocity: vec![0.0; dims.len()], position, current, personal_best: Vec::new() };
        personal_insert(&mut p, cfg.personal_archive_capacity);
        archive_insert(
            &mut archive,
            &ArchiveEntry { position: p.position.clone(), solution: p.current.clone() },
            cfg.archive_capacity,
        );
        swarm.push(p);
    }
    let mut history = vec![GenerationStats::collect(0, swarm.iter().map(|p| &p.current.objectives), spent())];

    'outer: for it in 0..cfg.iterations {
        for i in 0..swarm.len() {
            if exhausted() {
                break 'outer;
            }
            let leader = select_leader(&archive, &mut rng);
            let p = &mut swarm[i];
            let pbest = if p.personal_best.is_empty() {
                p.position.clone()
            } else {
                p.personal_best[rng.gen_range(0..p.personal_best.len())].position.clone()
            };
            let gbest = leader.map_or_else(|| p.position.clone(), |l| archive[l].position.clone());
            for d in 0..dims.len() {
                let range = dims.ranges()[d];
                let r1: f64 = rng.gen();
                let r2: f64 = rng.gen();
                let x = p.position[d];
                let v = cfg.inertia * p.velocity[d] + cfg.cognitive * r1 * (pbest[d] - x) + cfg.social * r2 * (gbest[d] - x);
                let vmax = range / 2.0;
                p.velocity[d] = v.clamp(-vmax, vmax);
                p.position[d] = (x + p.velocity[d]).clamp(0.0, range);
            }
            p.current = Solution::evaluated(problem, dims.decode(problem, &p.position));
            personal_insert(p, cfg.personal_archive_capacity);
            let entry = ArchiveEntry { position: p.position.clone(), solution: p.current.clone() };
            archive_insert(&mut archive, &entry, cfg.archive_capacity);
        }
        history.push(GenerationStats::collect(it + 1, swarm.iter().map(|p| &p.current.objectives), spent()));
    }

    let front = ParetoFront::from_candidates(archive.iter().map(|e| (e.solution.objectives, e.solution.chromosome.clone())));
    if front.is_empty() {
        return Err(SolveError::NoFeasibleSolution);
    }
    Ok(RunOutput { front, history, evaluations: spent(), archive })
}

/// Alias of [`pso_run`].
pub fn run<T: Scalar>(problem: &Problem<T>, cfg: &PsoConfig) -> Result<RunOutput<T>, SolveError> {
    pso_run(problem, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::test_support::*;
    use crate::model::{Decomposition, Instance, PhysicalNetwork, ServiceGraph};
    use crate::nsga2::{self, GaConfig};
    use crate::problem::EvalOptions;

    fn problem(nodes: usize, sgs: Vec<ServiceGraph>) -> Problem<f64> {
        let mut net = PhysicalNetwork {
            nodes: (0..nodes as u32).map(node).collect(),
            links: (1..nodes as u32).map(|i| link(i - 1, i, i as f64)).collect(),
        };
        for (i, n) in net.nodes.iter_mut().enumerate() {
            n.cpu_cost = 1.0 + i as f64;
        }
        Problem::new(Instance { physical_network: net, service_graphs: sgs, l_target: None, metadata: None }, EvalOptions::default())
            .unwrap()
    }

    fn two_sgs() -> Vec<ServiceGraph> {
        vec![
            ServiceGraph {
                id: 0,
                decompositions: vec![
                    Decomposition::chain(0, vec![nf(0, 500, 128, 256), nf(1, 250, 128, 256)]),
                    Decomposition::chain(1, vec![nf(0, 250, 128, 256), nf(1, 250, 128, 256), nf(2, 250, 128, 256)]),
                ],
            },
            ServiceGraph { id: 1, decompositions: vec![Decomposition::chain(0, vec![nf(0, 750, 256, 512)])] },
        ]
    }

    #[test]
    fn layout_and_decoding() {
        let p = problem(4, two_sgs());
        let dims = Dimensions::new(&p);
        assert_eq!(dims.ranges(), &[2.0, 4.0, 4.0, 4.0, 1.0, 4.0]);
        let c = dims.decode(&p, &[1.7, 0.2, 3.9, 4.0, 0.0, -3.0]);
        let hosts: Vec<(usize, usize)> = c.genes().iter().map(|g| (g.dec, g.host)).collect();
        assert_eq!(hosts, vec![(1, 0), (1, 3), (1, 3), (0, 0)]);
        assert!(c.check(p.instance()).is_ok());
        let short = dims.decode(&p, &[0.0, 2.5, 1.0, 3.0, 0.5, 2.0]);
        assert_eq!(short.len(), 3);
        assert!(short.check(p.instance()).is_ok());
    }

    #[test]
    fn single_node_matches_ga() {
        let sgs = vec![ServiceGraph {
            id: 0,
            decompositions: vec![Decomposition::chain(0, vec![nf(0, 250, 128, 256), nf(1, 250, 128, 256)])],
        }];
        let p = problem(1, sgs);
        let pso = pso_run(&p, &PsoConfig { iterations: 5, ..PsoConfig::default() }).unwrap();
        let ga = nsga2::run(&p, &GaConfig { generations: 5, ..GaConfig::default() }).unwrap();
        assert_eq!(pso.front.objective_pairs(), ga.front.objective_pairs());
        // node 0 has cpu unit cost 1
        assert_eq!(pso.front.objective_pairs(), vec![(1524.0, 0.0)]);
    }

    #[test]
    fn zero_iterations_keeps_initial_nondominated_swarm() {
        let p = problem(4, two_sgs());
        let cfg = PsoConfig { iterations: 0, seed: 3, ..PsoConfig::default() };
        let out = pso_run(&p, &cfg).unwrap();
        assert_eq!(out.evaluations, 60);
        assert_eq!(out.history.len(), 1);

        // replay the initial draws
        let dims = Dimensions::new(&p);
        let mut rng = seeded(3);
        let initial: Vec<(ObjectiveValues<f64>, Chromosome)> = (0..60)
            .map(|_| {
                let x: Vec<f64> = dims.ranges().iter().map(|&r| rng.gen_range(0.0..r)).collect();
                let c = dims.decode(&p, &x);
                (p.evaluate(&c), c)
            })
            .collect();
        let mut expected = ParetoFront::from_candidates(initial).objective_pairs();
        expected.dedup();
        assert_eq!(out.front.objective_pairs(), expected);
    }

    #[test]
    fn seeded_runs_are_deterministic() {
        let p = problem(4, two_sgs());
        let cfg = PsoConfig { iterations: 20, seed: 11, ..PsoConfig::default() };
        let a = pso_run(&p, &cfg).unwrap();
        let b = pso_run(&p, &cfg).unwrap();
        assert_eq!(a.front, b.front);
        assert_eq!(a.history, b.history);
    }

    #[test]
    fn archive_invariants_hold() {
        let p = problem(5, two_sgs());
        let out = pso_run(&p, &PsoConfig { iterations: 30, seed: 5, ..PsoConfig::default() }).unwrap();
        assert!(out.archive.iter().all(|e| e.solution.is_feasible()));
        for a in &out.archive {
            assert!(out.archive.iter().all(|b| !dominates(&a.solution.objectives, &b.solution.objectives)));
        }
        assert!(out.front.is_mutually_nondominated());
    }

    #[test]
    fn budget_is_respected() {
        let p = problem(4, two_sgs());
        let cfg = PsoConfig { iterations: 1000, max_evaluations: Some(777), ..PsoConfig::default() };
        assert_eq!(pso_run(&p, &cfg).unwrap().evaluations, 777);
    }

    #[test]
    fn archive_truncation_drops_most_crowded() {
        let entry = |c: f64, l: f64| ArchiveEntry {
            position: vec![],
            solution: Solution::new(Chromosome::default(), ObjectiveValues::feasible(c, l)),
        };
        let mut archive = Vec::new();
        for (c, l) in [(0.0, 10.0), (1.0, 9.0), (5.0, 5.0), (10.0, 0.0)] {
            archive_insert(&mut archive, &entry(c, l), 3);
        }
        let pairs: Vec<(f64, f64)> = archive.iter().map(|e| (e.solution.cost(), e.solution.latency())).collect();
        assert_eq!(pairs, vec![(0.0, 10.0), (5.0, 5.0), (10.0, 0.0)]);
        archive_insert(&mut archive, &entry(6.0, 6.0), 3);
        archive_insert(&mut archive, &entry(5.0, 5.0), 3);
        assert_eq!(archive.len(), 3);
    }

    #[test]
    fn config_validation() {
        assert!(PsoConfig::default().validate().is_ok());
        assert!(PsoConfig { inertia: 1.2, ..PsoConfig::default() }.validate().is_err());
        assert!(PsoConfig { social: 0.0, ..PsoConfig::default() }.validate().is_err());
        assert!(PsoConfig { archive_capacity: 10, ..PsoConfig::default() }.validate().is_err());
    }
}
