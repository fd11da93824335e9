//! Independent reference implementations used by the integration tests.
//! Nothing here calls into the library's evaluation, sorting or path code.

#![allow(dead_code)]

use std::collections::HashMap;

use modmvnf_core::{Chromosome, Instance};

pub const INF: f64 = f64::INFINITY;

/// (cost, latency, feasible)
pub type Point = (f64, f64, bool);

pub fn dominates(a: Point, b: Point) -> bool {
    match (a.2, b.2) {
        (true, false) => true,
        (false, _) => false,
        (true, true) => a.0 <= b.0 && a.1 <= b.1 && (a.0 < b.0 || a.1 < b.1),
    }
}

/// Fronts by repeatedly removing the non-dominated remainder.
pub fn peel(points: &[Point]) -> Vec<Vec<usize>> {
    let mut left: Vec<usize> = (0..points.len()).collect();
    let mut fronts = Vec::new();
    while !left.is_empty() {
        let front: Vec<usize> =
            left.iter().copied().filter(|&i| !left.iter().any(|&j| dominates(points[j], points[i]))).collect();
        left.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

/// Crowding distance per member of `front` (parallel). Ties in an objective
/// keep their order in `front`.
pub fn crowding(points: &[Point], front: &[usize]) -> Vec<f64> {
    let n = front.len();
    if n <= 2 {
        return vec![INF; n];
    }
    let mut d = vec![0.0; n];
    for m in 0..2 {
        let val = |k: usize| if m == 0 { points[front[k]].0 } else { points[front[k]].1 };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| val(a).partial_cmp(&val(b)).unwrap());
        let (lo, hi) = (val(order[0]), val(order[n - 1]));
        d[order[0]] = INF;
        d[order[n - 1]] = INF;
        if !(hi - lo > 0.0) || !(hi - lo).is_finite() {
            continue;
        }
        for k in 1..n - 1 {
            d[order[k]] += (val(order[k + 1]) - val(order[k - 1])) / (hi - lo);
        }
    }
    d
}

/// All-pairs shortest delays by Floyd-Warshall, keyed by node position.
pub fn floyd_warshall(inst: &Instance) -> Vec<Vec<f64>> {
    let nodes = &inst.physical_network.nodes;
    let pos: HashMap<u32, usize> = nodes.iter().enumerate().map(|(i, n)| (n.id, i)).collect();
    let n = nodes.len();
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for l in &inst.physical_network.links {
        let (a, b) = (pos[&l.a], pos[&l.b]);
        d[a][b] = d[a][b].min(l.delay);
        d[b][a] = d[b][a].min(l.delay);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Recomputes cost and latency of a chromosome straight from the instance
/// fields; `None` when any constraint fails.
pub fn naive_evaluate(inst: &Instance, paths: &[Vec<f64>], c: &Chromosome, over_edges: bool) -> Option<(f64, f64)> {
    let nodes = &inst.physical_network.nodes;
    let sgs = &inst.service_graphs;
    // group genes by service graph; every SG exactly once, one decomposition each
    let mut per_sg: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); sgs.len()];
    for g in c.genes() {
        if g.sg >= sgs.len() {
            return None;
        }
        per_sg[g.sg].push((g.dec, g.nf, g.host));
    }
    let mut used = vec![(0u64, 0u64, 0u64); nodes.len()];
    let mut cost = 0.0;
    let mut latency = 0.0;
    for (k, genes) in per_sg.iter().enumerate() {
        let dec = genes.first()?.0;
        let dc = sgs[k].decompositions.get(dec)?;
        if genes.iter().any(|g| g.0 != dec) || genes.len() != dc.nfs.len() {
            return None;
        }
        let mut host_of = vec![usize::MAX; dc.nfs.len()];
        for &(_, nf, host) in genes {
            if nf >= dc.nfs.len() || host >= nodes.len() || host_of[nf] != usize::MAX {
                return None;
            }
            host_of[nf] = host;
        }
        for (i, nf) in dc.nfs.iter().enumerate() {
            let node = &nodes[host_of[i]];
            if !node.types.contains(&nf.nf_type) {
                return None;
            }
            let u = &mut used[host_of[i]];
            u.0 += nf.cpu;
            u.1 += nf.mem;
            u.2 += nf.storage;
            cost += nf.cpu as f64 * node.cpu_cost + nf.mem as f64 * node.mem_cost + nf.storage as f64 * node.storage_cost;
        }
        if over_edges {
            for &(a, b) in &dc.edges {
                latency += paths[host_of[a]][host_of[b]];
            }
        } else {
            for i in 1..host_of.len() {
                latency += paths[host_of[i - 1]][host_of[i]];
            }
        }
    }
    for (u, n) in used.iter().zip(nodes) {
        if u.0 > n.cpu || u.1 > n.mem || u.2 > n.storage {
            return None;
        }
    }
    if let Some(t) = inst.l_target {
        if latency > t {
            return None;
        }
    }
    Some((cost, latency))
}

/// Relative closeness for values computed with a different summation order.
pub fn close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}
