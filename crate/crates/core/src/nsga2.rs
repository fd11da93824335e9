//! MODMVNF: NSGA-II over joint decomposition/placement chromosomes.
//!
//! Selection is a binary tournament under the crowded comparison. Parents that
//! chose the same decompositions are recombined segment-wise; the offspring are
//! then mutated by swapping hosts between random gene positions. Survivors of
//! `P_t ∪ Q_t` are taken front by front, the boundary front truncated by
//! descending crowding distance.

use std::cmp::Ordering;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::encoding::{random_solution, Chromosome, InitOptions, Solution};
use crate::front::ParetoFront;
use crate::objectives::ObjectiveValues;
use crate::problem::{Problem, SolveError};
use crate::rng::seeded;
use crate::scalar::Scalar;

pub use crate::objectives::dominates;

/// Fraction of used hosts turned into swap steps, as an exact ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapFraction {
    pub numerator: usize,
    pub denominator: usize,
}

impl SwapFraction {
    pub fn swaps(&self, used_hosts: usize) -> usize {
        used_hosts * self.numerator / self.denominator
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_segments: usize,
    pub mutation_fraction: SwapFraction,
    pub max_mutation_retries: usize,
    pub max_init_retries: usize,
    /// Failed (different-decomposition) pairings tolerated per `make_new_pop`
    /// before the remaining slots are filled with mutated tournament winners.
    /// `None` means four times the population size.
    pub max_pairing_attempts: Option<usize>,
    pub strict_init: bool,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 60,
            generations: 100,
            crossover_segments: 4,
            mutation_fraction: SwapFraction { numerator: 1, denominator: 3 },
            max_mutation_retries: 20,
            max_init_retries: 50,
            max_pairing_attempts: None,
            strict_init: false,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), SolveError> {
        let err = |m: &str| Err(SolveError::InvalidConfig(m.to_string()));
        if self.population_size < 4 || self.population_size % 2 != 0 {
            return err("population_size must be even and at least 4");
        }
        if self.generations < 1 {
            return err("generations must be at least 1");
        }
        if self.crossover_segments < 2 {
            return err("crossover_segments must be at least 2");
        }
        if self.mutation_fraction.denominator == 0 {
            return err("mutation_fraction denominator must be positive");
        }
        Ok(())
    }

    pub fn pairing_attempts(&self) -> usize {
        self.max_pairing_attempts.unwrap_or(4 * self.population_size)
    }

    pub fn init_options(&self) -> InitOptions {
        InitOptions { max_init_retries: self.max_init_retries, strict_init: self.strict_init }
    }
}

/// Deb's fast non-dominated sort. Returns fronts as index lists, best first.
pub fn fast_non_dominated_sort<T: Scalar>(points: &[ObjectiveValues<T>]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    let mut fronts = vec![Vec::new()];
    for p in 0..n {
        for q in 0..n {
            if p == q {
                continue;
            }
            if dominates(&points[p], &points[q]) {
                dominated_by[p].push(q);
            } else if dominates(&points[q], &points[p]) {
                domination_count[p] += 1;
            }
        }
        if domination_count[p] == 0 {
            fronts[0].push(p);
        }
    }
    let mut i = 0;
    while !fronts[i].is_empty() {
        let mut next = Vec::new();
        for &p in &fronts[i] {
            for &q in &dominated_by[p] {
                domination_count[q] -= 1;
                if domination_count[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        i += 1;
        fronts.push(next);
    }
    fronts.pop();
    fronts
}

/// Crowding distance of every member of `front` (parallel to `front`).
pub fn crowding_distances<T: Scalar>(points: &[ObjectiveValues<T>], front: &[usize]) -> Vec<T> {
    let n = front.len();
    let mut dist = vec![T::zero(); n];
    if n <= 2 {
        return vec![T::infinity(); n];
    }
    for m in 0..2 {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            points[front[a]].get(m).partial_cmp(&points[front[b]].get(m)).unwrap_or(Ordering::Equal)
        });
        let lo = points[front[order[0]]].get(m);
        let hi = points[front[order[n - 1]]].get(m);
        dist[order[0]] = T::infinity();
        dist[order[n - 1]] = T::infinity();
        let range = hi - lo;
        if !(range > T::zero()) || !range.is_finite() {
            continue;
        }
        for k in 1..n - 1 {
            let gap = points[front[order[k + 1]]].get(m) - points[front[order[k - 1]]].get(m);
            dist[order[k]] = dist[order[k]] + gap / range;
        }
    }
    dist
}

/// `<_n`: lower rank first, then larger crowding distance.
pub fn crowded_compare<T: Scalar>(a: &Solution<T>, b: &Solution<T>) -> Ordering {
    let ra = a.rank.unwrap_or(usize::MAX);
    let rb = b.rank.unwrap_or(usize::MAX);
    ra.cmp(&rb)
        .then_with(|| b.crowding_distance.partial_cmp(&a.crowding_distance).unwrap_or(Ordering::Equal))
}

/// Sorts the population into fronts and writes rank and crowding distance
/// back to every member.
pub fn sort_population<T: Scalar>(pop: &mut [Solution<T>]) -> Vec<Vec<usize>> {
    let objs: Vec<ObjectiveValues<T>> = pop.iter().map(|s| s.objectives).collect();
    let fronts = fast_non_dominated_sort(&objs);
    for (k, front) in fronts.iter().enumerate() {
        let d = crowding_distances(&objs, front);
        for (&i, di) in front.iter().zip(d) {
            pop[i].rank = Some(k + 1);
            pop[i].crowding_distance = di;
        }
    }
    fronts
}

/// Picks two distinct members uniformly and returns the index of the crowded
/// comparison winner (the first drawn on a tie).
pub fn binary_tournament<T: Scalar, R: Rng + ?Sized>(pop: &[Solution<T>], rng: &mut R) -> usize {
    let n = pop.len();
    if n == 1 {
        return 0;
    }
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    match crowded_compare(&pop[a], &pop[b]) {
        Ordering::Greater => b,
        _ => a,
    }
}

/// Segment crossover with explicit picks: `picks[s]` true means offspring 1
/// takes segment `s` from `p1` (and offspring 2 from `p2`). Segments are
/// `len / picks.len()` genes long, the remainder joining the last one.
/// `None` when the parents selected different decompositions.
pub fn crossover_with_picks(p1: &Chromosome, p2: &Chromosome, picks: &[bool]) -> Option<(Chromosome, Chromosome)> {
    if !p1.same_decompositions(p2) || p1.len() != p2.len() || picks.is_empty() {
        return None;
    }
    let len = p1.len();
    let k = picks.len();
    let size = len / k;
    let mut o1 = Vec::with_capacity(len);
    let mut o2 = Vec::with_capacity(len);
    for (s, &from_first) in picks.iter().enumerate() {
        let start = s * size;
        let end = if s + 1 == k { len } else { start + size };
        let (a, b) = if from_first { (p1, p2) } else { (p2, p1) };
        o1.extend_from_slice(&a.genes()[start..end]);
        o2.extend_from_slice(&b.genes()[start..end]);
    }
    Some((Chromosome::new(o1), Chromosome::new(o2)))
}

/// Segment crossover with a fair coin per segment; offspring are evaluated.
pub fn crossover<T: Scalar, R: Rng + ?Sized>(
    p1: &Solution<T>,
    p2: &Solution<T>,
    problem: &Problem<T>,
    cfg: &GaConfig,
    rng: &mut R,
) -> Option<(Solution<T>, Solution<T>)> {
    if !p1.chromosome.same_decompositions(&p2.chromosome) {
        return None;
    }
    let picks: Vec<bool> = (0..cfg.crossover_segments).map(|_| rng.gen_bool(0.5)).collect();
    let (c1, c2) = crossover_with_picks(&p1.chromosome, &p2.chromosome, &picks)?;
    Some((Solution::evaluated(problem, c1), Solution::evaluated(problem, c2)))
}

/// Host-swap mutation. Performs `swaps(num_used_hosts)` random host swaps and
/// re-evaluates; while the result is infeasible the swapping continues from
/// the current state, at most `max_mutation_retries` more rounds. If no
/// feasible state is reached the input is returned unchanged.
pub fn mutation<T: Scalar, R: Rng + ?Sized>(
    offspring: Solution<T>,
    problem: &Problem<T>,
    cfg: &GaConfig,
    rng: &mut R,
) -> Solution<T> {
    let swaps = cfg.mutation_fraction.swaps(offspring.num_used_hosts);
    let len = offspring.chromosome.len();
    if swaps == 0 || len == 0 {
        return offspring;
    }
    let mut chromosome = offspring.chromosome.clone();
    for _ in 0..=cfg.max_mutation_retries {
        for _ in 0..swaps {
            let j = rng.gen_range(0..len);
            let k = rng.gen_range(0..len);
            chromosome.swap_hosts(j, k);
        }
        let objectives = problem.evaluate(&chromosome);
        if objectives.feasible {
            return Solution::new(chromosome, objectives);
        }
    }
    offspring
}

/// Builds an offspring population of `population_size` members.
pub fn make_new_pop<T: Scalar, R: Rng + ?Sized>(
    pop: &[Solution<T>],
    problem: &Problem<T>,
    cfg: &GaConfig,
    rng: &mut R,
) -> Vec<Solution<T>> {
    make_new_pop_counted(pop, problem, cfg, rng).0
}

/// As [`make_new_pop`], also returning the number of pairings that produced
/// no offspring.
pub fn make_new_pop_counted<T: Scalar, R: Rng + ?Sized>(
    pop: &[Solution<T>],
    problem: &Problem<T>,
    cfg: &GaConfig,
    rng: &mut R,
) -> (Vec<Solution<T>>, usize) {
    let n = cfg.population_size;
    let mut q = Vec::with_capacity(n);
    let mut failures = 0;
    while q.len() < n {
        if failures < cfg.pairing_attempts() {
            let a = binary_tournament(pop, rng);
            let b = binary_tournament(pop, rng);
            match crossover(&pop[a], &pop[b], problem, cfg, rng) {
                Some((o1, o2)) => {
                    q.push(mutation(o1, problem, cfg, rng));
                    if q.len() < n {
                        q.push(mutation(o2, problem, cfg, rng));
                    }
                }
                None => failures += 1,
            }
        } else {
            let w = binary_tournament(pop, rng);
            let child = pop[w].clone().unsorted();
            q.push(mutation(child, problem, cfg, rng));
        }
    }
    (q, failures)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats<T> {
    pub generation: usize,
    pub min_cost: Option<T>,
    pub mean_cost: Option<T>,
    pub min_latency: Option<T>,
    pub mean_latency: Option<T>,
    pub feasible: usize,
    pub evaluations: u64,
}

impl<T: Scalar> GenerationStats<T> {
    /// Statistics over the feasible members of `values`.
    pub fn collect<'a>(generation: usize, values: impl Iterator<Item = &'a ObjectiveValues<T>>, evaluations: u64) -> Self {
        let feasible: Vec<&ObjectiveValues<T>> = values.filter(|v| v.feasible).collect();
        let n = feasible.len();
        let (min_cost, mean_cost, min_latency, mean_latency) = if n == 0 {
            (None, None, None, None)
        } else {
            let count = T::from_usize(n).expect("count fits scalar");
            let sum_c = feasible.iter().fold(T::zero(), |a, v| a + v.cost);
            let sum_l = feasible.iter().fold(T::zero(), |a, v| a + v.latency);
            let min_c = feasible.iter().fold(T::infinity(), |a, v| a.min(v.cost));
            let min_l = feasible.iter().fold(T::infinity(), |a, v| a.min(v.latency));
            (Some(min_c), Some(sum_c / count), Some(min_l), Some(sum_l / count))
        };
        GenerationStats { generation, min_cost, mean_cost, min_latency, mean_latency, feasible: n, evaluations }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput<T> {
    pub front: ParetoFront<T>,
    pub history: Vec<GenerationStats<T>>,
    /// Objective evaluations spent by this run.
    pub evaluations: u64,
    /// Final parent population with ranks and crowding distances.
    pub population: Vec<Solution<T>>,
}

/// Checks the front partition invariants: disjoint, exhaustive, members of a
/// front mutually non-dominated, each later member dominated by some member
/// of the previous front.
pub fn fronts_are_valid<T: Scalar>(points: &[ObjectiveValues<T>], fronts: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; points.len()];
    for f in fronts {
        for &i in f {
            if i >= points.len() || seen[i] {
                return false;
            }
            seen[i] = true;
        }
    }
    if !seen.into_iter().all(|s| s) {
        return false;
    }
    for (k, f) in fronts.iter().enumerate() {
        for &a in f {
            if f.iter().any(|&b| dominates(&points[b], &points[a])) {
                return false;
            }
            if k > 0 && !fronts[k - 1].iter().any(|&b| dominates(&points[b], &points[a])) {
                return false;
            }
        }
    }
    true
}

/// Runs the generational loop for `cfg.generations` generations.
pub fn run<T: Scalar>(problem: &Problem<T>, cfg: &GaConfig) -> Result<RunOutput<T>, SolveError> {
    cfg.validate()?;
    let start_evals = problem.evaluations();
    let spent = || problem.evaluations() - start_evals;
    let mut rng = seeded(cfg.seed);
    let n = cfg.population_size;

    let mut parents = Vec::with_capacity(n);
    for _ in 0..n {
        parents.push(random_solution(problem, &cfg.init_options(), &mut rng)?);
    }
    sort_population(&mut parents);
    let mut history = vec![GenerationStats::collect(0, parents.iter().map(|s| &s.objectives), spent())];
    let mut offspring = make_new_pop(&parents, problem, cfg, &mut rng);

    for t in 0..cfg.generations {
        let mut union: Vec<Solution<T>> = parents.into_iter().chain(offspring).map(Solution::unsorted).collect();
        let objs: Vec<ObjectiveValues<T>> = union.iter().map(|s| s.objectives).collect();
        let fronts = fast_non_dominated_sort(&objs);
        debug_assert!(fronts_are_valid(&objs, &fronts));

        let mut selected: Vec<usize> = Vec::with_capacity(n);
        for (k, front) in fronts.iter().enumerate() {
            if selected.len() == n {
                break;
            }
            let dist = crowding_distances(&objs, front);
            for (&i, d) in front.iter().zip(dist) {
                union[i].rank = Some(k + 1);
                union[i].crowding_distance = d;
            }
            if selected.len() + front.len() <= n {
                selected.extend_from_slice(front);
            } else {
                let mut boundary = front.clone();
                boundary.sort_by(|&a, &b| crowded_compare(&union[a], &union[b]).then(a.cmp(&b)));
                selected.extend_from_slice(&boundary[..n - selected.len()]);
            }
        }
        let mut slots: Vec<Option<Solution<T>>> = union.into_iter().map(Some).collect();
        parents = selected.iter().map(|&i| slots[i].take().expect("selected once")).collect();

        history.push(GenerationStats::collect(t + 1, parents.iter().map(|s| &s.objectives), spent()));
        offspring = if t + 1 < cfg.generations { make_new_pop(&parents, problem, cfg, &mut rng) } else { Vec::new() };
    }

    let front = ParetoFront::from_candidates(
        parents.iter().filter(|s| s.rank == Some(1)).map(|s| (s.objectives, s.chromosome.clone())),
    );
    if front.is_empty() {
        return Err(SolveError::NoFeasibleSolution);
    }
    Ok(RunOutput { front, history, evaluations: spent(), population: parents })
}
