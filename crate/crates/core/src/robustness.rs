//! Percolation under random failures and targeted attacks.
//!
//! A removal experiment deletes nodes one at a time and tracks the largest
//! connected component. The percolation threshold `f_c` is the first removed
//! fraction at which the giant component falls below 1% of the original node
//! count (at least 2 nodes) while at least that many nodes are still present,
//! i.e. the network has fragmented rather than simply run out of nodes.

use std::cmp::Reverse;
use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, Graph, NodeId};
use crate::metrics::brandes;
use crate::rng;

/// `1 - 1 / (kappa - 1)` with `kappa = (gamma-2)/(3-gamma) * k_min^(gamma-2) * k_max^(3-gamma)`,
/// the random-failure threshold of a scale-free degree distribution with `2 < gamma < 3`.
///
/// A negative result means the distribution is not expected to carry a giant
/// component at all.
pub fn molloy_reed_fc(gamma: f64, k_min: u64, k_max: u64) -> Result<f64> {
    if !(gamma > 2.0 && gamma < 3.0) {
        return Err(Error::domain(format!("Molloy-Reed threshold needs 2 < gamma < 3, got {gamma}")));
    }
    if k_min < 1 || k_min > k_max {
        return Err(Error::domain("Molloy-Reed threshold needs 1 <= k_min <= k_max"));
    }
    let kappa = (gamma - 2.0) / (3.0 - gamma)
        * (k_min as f64).powf(gamma - 2.0)
        * (k_max as f64).powf(3.0 - gamma);
    let denominator = kappa - 1.0;
    if denominator <= 0.0 {
        return Err(Error::domain(format!(
            "Molloy-Reed denominator kappa - 1 = {denominator} is not positive"
        )));
    }
    Ok(1.0 - 1.0 / denominator)
}

/// Smallest positive and largest degree of the graph.
pub fn degree_extremes(g: &Graph) -> Option<(u64, u64)> {
    let degrees: Vec<usize> = g.degrees().into_iter().filter(|&d| d > 0).collect();
    Some((*degrees.iter().min()? as u64, *degrees.iter().max()? as u64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StrategyKind {
    /// Uniformly random removal order.
    #[serde(rename = "RND")]
    Random,
    /// Highest current degree first, recomputed after every removal.
    #[serde(rename = "HDR")]
    HighDegree,
    /// Highest current betweenness first, recomputed after every removal.
    #[serde(rename = "HBR")]
    HighBetweenness,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 3] = [StrategyKind::Random, StrategyKind::HighDegree, StrategyKind::HighBetweenness];

    pub fn code(self) -> &'static str {
        match self {
            StrategyKind::Random => "RND",
            StrategyKind::HighDegree => "HDR",
            StrategyKind::HighBetweenness => "HBR",
        }
    }

    pub fn is_deterministic(self) -> bool {
        !matches!(self, StrategyKind::Random)
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl std::str::FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "RND" | "RANDOM" => Ok(StrategyKind::Random),
            "HDR" | "DEGREE" => Ok(StrategyKind::HighDegree),
            "HBR" | "BETWEENNESS" => Ok(StrategyKind::HighBetweenness),
            other => Err(Error::domain(format!("unknown removal strategy `{other}`"))),
        }
    }
}

/// Removal strategy. Targeted strategies break ties by a seed-keyed shuffle
/// of the nodes; the random strategy draws one order per trial from the seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovalStrategy {
    pub kind: StrategyKind,
    pub seed: u64,
}

impl RemovalStrategy {
    pub fn new(kind: StrategyKind, seed: u64) -> Self {
        RemovalStrategy { kind, seed }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub fraction_removed: f64,
    pub giant_fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PercolationResult {
    pub strategy: RemovalStrategy,
    pub trials: usize,
    pub node_count: usize,
    /// Giant-component size below which the network counts as fragmented.
    pub threshold_size: f64,
    pub curve: Vec<CurvePoint>,
    /// `None` when the threshold is never reached.
    pub f_c: Option<f64>,
}

/// Fragmentation size: 1% of the original nodes, at least 2.
pub fn threshold_size(node_count: usize) -> f64 {
    (0.01 * node_count as f64).max(2.0)
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns the size of the merged set.
    fn union(&mut self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a != b {
            if self.size[a] < self.size[b] {
                std::mem::swap(&mut a, &mut b);
            }
            self.parent[b] = a;
            self.size[a] += self.size[b];
        }
        self.size[a]
    }
}

/// `giant[r]` = largest component size after removing `order[..r]`.
/// `order` must be a permutation of all nodes.
pub(crate) fn giant_after_removals(adj: &[Vec<usize>], order: &[usize]) -> Vec<usize> {
    let n = adj.len();
    let mut alive = vec![false; n];
    let mut uf = UnionFind::new(n);
    let mut giant = vec![0; n + 1];
    let mut best = 0;
    for r in (0..n).rev() {
        let v = order[r];
        alive[v] = true;
        best = best.max(1);
        for &w in &adj[v] {
            if alive[w] {
                best = best.max(uf.union(v, w));
            }
        }
        giant[r] = best;
    }
    giant
}

/// Position of every node in a seed-keyed shuffle; `None` keeps id order.
fn tie_ranks(n: usize, seed: Option<u64>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    if let Some(seed) = seed {
        order.shuffle(&mut rng::master(seed));
    }
    let mut rank = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        rank[i] = pos;
    }
    rank
}

/// Complete adaptive highest-degree removal order.
fn high_degree_order(adj: &[Vec<usize>], rank: &[usize]) -> Vec<usize> {
    let n = adj.len();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut queue: BTreeSet<(Reverse<usize>, usize, usize)> =
        (0..n).map(|i| (Reverse(degree[i]), rank[i], i)).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    while let Some((_, _, v)) = queue.pop_first() {
        alive[v] = false;
        order.push(v);
        for &w in &adj[v] {
            if alive[w] {
                queue.remove(&(Reverse(degree[w]), rank[w], w));
                degree[w] -= 1;
                queue.insert((Reverse(degree[w]), rank[w], w));
            }
        }
    }
    order
}

/// Complete adaptive highest-betweenness removal order. Betweenness is
/// recomputed exactly on the surviving graph after every removal.
fn high_betweenness_order(adj: &[Vec<usize>], rank: &[usize]) -> Vec<usize> {
    let n = adj.len();
    let mut alive = vec![true; n];
    let mut scores = brandes(adj);
    let mut order = Vec::with_capacity(n);
    let mut global_to_local = vec![usize::MAX; n];
    let mut affected: Vec<usize> = Vec::new();
    for _ in 0..n {
        let mut best = usize::MAX;
        for v in (0..n).filter(|&v| alive[v]) {
            if best == usize::MAX {
                best = v;
                continue;
            }
            let (s, b) = (scores[v], scores[best]);
            // Scores equal up to rounding are ties.
            let tie = (s - b).abs() <= 1e-9 * b.abs().max(1.0);
            if (!tie && s > b) || (tie && rank[v] < rank[best]) {
                best = v;
            }
        }
        alive[best] = false;
        order.push(best);

        // Only the pieces of the victim's component change; recompute those.
        affected.clear();
        for &start in &adj[best] {
            if !alive[start] || global_to_local[start] != usize::MAX {
                continue;
            }
            let mut head = affected.len();
            global_to_local[start] = 0;
            affected.push(start);
            while head < affected.len() {
                let v = affected[head];
                head += 1;
                for &w in &adj[v] {
                    if alive[w] && global_to_local[w] == usize::MAX {
                        global_to_local[w] = 0;
                        affected.push(w);
                    }
                }
            }
        }
        if affected.is_empty() {
            continue;
        }
        affected.sort_unstable();
        for (i, &v) in affected.iter().enumerate() {
            global_to_local[v] = i;
        }
        let sub: Vec<Vec<usize>> = affected
            .iter()
            .map(|&v| adj[v].iter().filter(|&&w| alive[w]).map(|&w| global_to_local[w]).collect())
            .collect();
        for (&v, score) in affected.iter().zip(brandes(&sub)) {
            scores[v] = score;
            global_to_local[v] = usize::MAX;
        }
    }
    order
}

fn removal_order(g: &Graph, kind: StrategyKind, seed: u64, trial: u64) -> Vec<usize> {
    let adj = g.adjacency();
    match kind {
        StrategyKind::Random => {
            let mut order: Vec<usize> = (0..adj.len()).collect();
            order.shuffle(&mut rng::child(seed, trial));
            order
        }
        StrategyKind::HighDegree => high_degree_order(adj, &tie_ranks(adj.len(), Some(seed))),
        StrategyKind::HighBetweenness => high_betweenness_order(adj, &tie_ranks(adj.len(), Some(seed))),
    }
}

/// Full removal order of a strategy (trial 0 for the random strategy).
pub fn strategy_order(g: &Graph, strategy: RemovalStrategy) -> Vec<NodeId> {
    removal_order(g, strategy.kind, strategy.seed, 0)
        .into_iter()
        .map(|i| g.nodes()[i].clone())
        .collect()
}

/// Removes every node according to `strategy` and samples the giant-component
/// fraction on the grid `0, step, 2 step, ..., 1`. Random removal is repeated
/// `trials` times and averaged pointwise; targeted strategies run once.
pub fn percolate(g: &Graph, strategy: RemovalStrategy, trials: usize, step: f64) -> Result<PercolationResult> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::domain("percolation on an empty graph"));
    }
    if !(step > 0.0 && step <= 0.05) {
        return Err(Error::domain(format!("step must lie in (0, 0.05], got {step}")));
    }
    if trials == 0 {
        return Err(Error::domain("at least one trial is required"));
    }
    let trials = if strategy.kind.is_deterministic() { 1 } else { trials };

    let points = (1.0 / step - 1e-9).ceil() as usize;
    let grid: Vec<(f64, usize)> = (0..=points)
        .map(|i| {
            let f = (i as f64 * step).min(1.0);
            (f, (f * n as f64).round() as usize)
        })
        .collect();

    let per_trial: Vec<Vec<usize>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let order = removal_order(g, strategy.kind, strategy.seed, t);
            let giant = giant_after_removals(g.adjacency(), &order);
            grid.iter().map(|&(_, r)| giant[r]).collect()
        })
        .collect();

    let threshold = threshold_size(n);
    let mut curve = Vec::with_capacity(grid.len());
    let mut f_c = None;
    for (i, &(f, removed)) in grid.iter().enumerate() {
        let mean_giant = per_trial.iter().map(|t| t[i] as f64).sum::<f64>() / trials as f64;
        curve.push(CurvePoint {
            fraction_removed: f,
            giant_fraction: mean_giant / n as f64,
        });
        let remaining = (n - removed) as f64;
        if f_c.is_none() && mean_giant < threshold && remaining >= threshold {
            f_c = Some(f);
        }
    }
    Ok(PercolationResult {
        strategy,
        trials,
        node_count: n,
        threshold_size: threshold,
        curve,
        f_c,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkState {
    pub component_count: usize,
    pub giant_size: usize,
    pub remaining_capacity_sat: u64,
    pub remaining_capacity_fraction: f64,
    /// Over the giant component; `None` when it has fewer than two nodes.
    pub mean_shortest_path: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackStep {
    pub step: usize,
    pub removed: NodeId,
    /// Degree of the removed node at the moment of removal.
    pub degree: usize,
    #[serde(flatten)]
    pub state: NetworkState,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackReport {
    pub initial: NetworkState,
    pub steps: Vec<AttackStep>,
}

/// Index adjacency with capacities for bookkeeping on an alive mask.
struct Residual<'g> {
    g: &'g Graph,
    incident: Vec<Vec<(usize, u64)>>,
    alive: Vec<bool>,
    degree: Vec<usize>,
    capacity: u64,
    total_capacity: u64,
}

impl<'g> Residual<'g> {
    fn new(g: &'g Graph) -> Self {
        let n = g.node_count();
        let mut incident = vec![Vec::new(); n];
        for e in g.edge_records() {
            incident[e.a].push((e.b, e.capacity));
            incident[e.b].push((e.a, e.capacity));
        }
        let total = g.total_capacity();
        Residual {
            g,
            incident,
            alive: vec![true; n],
            degree: g.degrees(),
            capacity: total,
            total_capacity: total,
        }
    }

    fn remove(&mut self, v: usize) {
        debug_assert!(self.alive[v]);
        self.alive[v] = false;
        for &(w, cap) in &self.incident[v] {
            if self.alive[w] {
                self.capacity -= cap;
                self.degree[w] -= 1;
            }
        }
        self.degree[v] = 0;
    }

    fn capacity_fraction(&self) -> f64 {
        if self.total_capacity == 0 {
            if self.alive.iter().all(|&a| a) {
                1.0
            } else {
                0.0
            }
        } else {
            self.capacity as f64 / self.total_capacity as f64
        }
    }

    fn state(&self) -> NetworkState {
        let comps = graph::component_partition(self.g.adjacency(), Some(&self.alive));
        let giant: &[usize] = comps.first().map(Vec::as_slice).unwrap_or(&[]);
        let mean_shortest_path = (giant.len() >= 2).then(|| {
            let mut keep = vec![false; self.alive.len()];
            for &i in giant {
                keep[i] = true;
            }
            let sub = self.g.induced(&keep);
            let stats = graph::all_pairs_stats(sub.adjacency());
            stats.distance_sum as f64 / stats.pair_count as f64
        });
        NetworkState {
            component_count: comps.len(),
            giant_size: giant.len(),
            remaining_capacity_sat: self.capacity,
            remaining_capacity_fraction: self.capacity_fraction(),
            mean_shortest_path,
        }
    }
}

/// Removes the current highest-degree node `count` times (ties: smallest id),
/// recording the network state after each removal.
pub fn hub_removal_cumulative(g: &Graph, count: usize) -> Result<AttackReport> {
    if count > g.node_count() {
        return Err(Error::domain(format!(
            "cannot remove {count} hubs from a graph with {} nodes",
            g.node_count()
        )));
    }
    let mut residual = Residual::new(g);
    let initial = residual.state();
    let mut steps = Vec::with_capacity(count);
    for step in 1..=count {
        let victim = (0..g.node_count())
            .filter(|&i| residual.alive[i])
            .max_by_key(|&i| (residual.degree[i], Reverse(i)))
            .expect("count <= node count");
        let degree = residual.degree[victim];
        residual.remove(victim);
        steps.push(AttackStep {
            step,
            removed: g.nodes()[victim].clone(),
            degree,
            state: residual.state(),
        });
    }
    Ok(AttackReport { initial, steps })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingleRemoval {
    pub node: NodeId,
    pub degree: usize,
    pub component_count: usize,
}

/// Removes each of the `top_k` highest-degree nodes of the original graph on
/// its own and counts the resulting components.
pub fn hub_removal_single(g: &Graph, top_k: usize) -> Result<Vec<SingleRemoval>> {
    let n = g.node_count();
    if top_k > n {
        return Err(Error::domain(format!("top_k {top_k} exceeds node count {n}")));
    }
    let degrees = g.degrees();
    let mut hubs: Vec<usize> = (0..n).collect();
    hubs.sort_by_key(|&i| (Reverse(degrees[i]), i));
    hubs.truncate(top_k);
    Ok(hubs
        .into_par_iter()
        .map(|h| {
            let mut alive = vec![true; n];
            alive[h] = false;
            SingleRemoval {
                node: g.nodes()[h].clone(),
                degree: degrees[h],
                component_count: graph::component_partition(g.adjacency(), Some(&alive)).len(),
            }
        })
        .collect())
}

/// Highest-degree-first removal order with ties by smallest id, adaptive.
pub fn hub_order(g: &Graph) -> Vec<NodeId> {
    let adj = g.adjacency();
    high_degree_order(adj, &tie_ranks(adj.len(), None))
        .into_iter()
        .map(|i| g.nodes()[i].clone())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityPoint {
    pub nodes_removed: usize,
    pub remaining_capacity_fraction: f64,
}

/// Share of the original capacity carried by edges whose endpoints both
/// survive, after each prefix of `order` (starting with nothing removed).
pub fn capacity_degradation(g: &Graph, order: &[NodeId]) -> Result<Vec<CapacityPoint>> {
    let mut residual = Residual::new(g);
    let mut out = Vec::with_capacity(order.len() + 1);
    out.push(CapacityPoint {
        nodes_removed: 0,
        remaining_capacity_fraction: residual.capacity_fraction(),
    });
    for (k, id) in order.iter().enumerate() {
        let v = g.require(id)?;
        if !residual.alive[v] {
            return Err(Error::domain(format!("node {id} appears twice in the removal order")));
        }
        residual.remove(v);
        out.push(CapacityPoint {
            nodes_removed: k + 1,
            remaining_capacity_fraction: residual.capacity_fraction(),
        });
    }
    Ok(out)
}

/// Sentinel capacity of reinforcement edges.
pub const REINFORCEMENT_CAPACITY: u64 = 1;

/// Adds `new_edge_count` edges between uniformly sampled distinct, not yet
/// adjacent pairs of peripheral nodes (degree `<= degree_threshold`).
pub fn reinforce_periphery(g: &Graph, degree_threshold: usize, new_edge_count: usize, seed: u64) -> Result<Graph> {
    let adj = g.adjacency();
    let periphery: Vec<usize> = (0..adj.len()).filter(|&i| adj[i].len() <= degree_threshold).collect();
    let p = periphery.len();
    if p < 2 {
        return Err(Error::domain(format!(
            "need at least two nodes with degree <= {degree_threshold}, found {p}"
        )));
    }
    let mut is_peripheral = vec![false; adj.len()];
    for &i in &periphery {
        is_peripheral[i] = true;
    }
    let linked: usize = periphery
        .iter()
        .map(|&i| adj[i].iter().filter(|&&j| j > i && is_peripheral[j]).count())
        .sum();
    let available = p * (p - 1) / 2 - linked;
    if new_edge_count > available {
        return Err(Error::domain(format!(
            "only {available} peripheral pairs can be connected, {new_edge_count} requested"
        )));
    }
    if new_edge_count == 0 {
        return Ok(g.clone());
    }

    let mut rng = rng::master(seed);
    let adjacent = |a: usize, b: usize| adj[a].binary_search(&b).is_ok();
    let mut chosen: Vec<(usize, usize)> = Vec::with_capacity(new_edge_count);
    if 2 * new_edge_count <= available {
        let mut taken = HashSet::with_capacity(new_edge_count);
        while chosen.len() < new_edge_count {
            let a = periphery[rng.random_range(0..p)];
            let b = periphery[rng.random_range(0..p)];
            let pair = (a.min(b), a.max(b));
            if a != b && !adjacent(a, b) && taken.insert(pair) {
                chosen.push(pair);
            }
        }
    } else {
        let mut candidates = Vec::with_capacity(available);
        for (x, &a) in periphery.iter().enumerate() {
            for &b in &periphery[x + 1..] {
                if !adjacent(a, b) {
                    candidates.push((a, b));
                }
            }
        }
        let (picked, _) = candidates.partial_shuffle(&mut rng, new_edge_count);
        chosen.extend_from_slice(picked);
    }
    let ids = g.nodes();
    g.with_added_edges(
        chosen
            .into_iter()
            .map(|(a, b)| (ids[a].clone(), ids[b].clone(), REINFORCEMENT_CAPACITY)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{graph, id, star};

    fn complete(n: usize) -> Graph {
        let nodes: Vec<NodeId> = (0..n).map(NodeId::from).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((NodeId::from(i), NodeId::from(j), 1));
            }
        }
        Graph::build(nodes, edges).unwrap()
    }

    #[test]
    fn molloy_reed_examples() {
        assert!((molloy_reed_fc(2.5, 1, 100).unwrap() - 8.0 / 9.0).abs() < 1e-12);
        // kappa = k_max^0.5 = 2 gives denominator 1 -> f_c = 0; kappa = 1 is singular.
        assert!(molloy_reed_fc(2.5, 1, 4).unwrap().abs() < 1e-12);
        assert!(molloy_reed_fc(2.5, 1, 1).is_err());
        assert!(molloy_reed_fc(3.0, 1, 100).is_err());
        assert!(molloy_reed_fc(2.0, 1, 100).is_err());
        assert!(molloy_reed_fc(2.5, 5, 4).is_err());
    }

    #[test]
    fn giant_sizes_by_reverse_union_find() {
        let g = graph(&[("a", "b"), ("b", "c"), ("c", "d")]);
        // Remove b first: {a}, {c, d}.
        let giant = giant_after_removals(g.adjacency(), &[1, 0, 2, 3]);
        assert_eq!(giant, vec![4, 2, 2, 1, 0]);
    }

    #[test]
    fn star_hdr_threshold() {
        let g = star(200);
        let r = percolate(&g, RemovalStrategy::new(StrategyKind::HighDegree, 1), 5, 0.005).unwrap();
        assert_eq!(r.trials, 1);
        assert_eq!(r.f_c, Some(0.005));
        assert_eq!(r.curve[0].giant_fraction, 1.0);
        assert_eq!(r.curve.last().unwrap().fraction_removed, 1.0);
    }

    #[test]
    fn complete_graph_random_removal_never_fragments() {
        let r = percolate(&complete(100), RemovalStrategy::new(StrategyKind::Random, 3), 10, 0.005).unwrap();
        assert_eq!(r.f_c, None);
        assert_eq!(r.curve[0].giant_fraction, 1.0);
    }

    #[test]
    fn percolate_rejects_bad_parameters() {
        let g = star(5);
        let s = RemovalStrategy::new(StrategyKind::Random, 0);
        assert!(percolate(&g, s, 0, 0.01).is_err());
        assert!(percolate(&g, s, 1, 0.0).is_err());
        assert!(percolate(&g, s, 1, 0.2).is_err());
        assert!(percolate(&Graph::build(Vec::new(), Vec::new()).unwrap(), s, 1, 0.01).is_err());
    }

    #[test]
    fn targeted_runs_are_reproducible() {
        let g = crate::ingest::generate(&crate::ingest::GeneratorSpec::parse("ba:n=150,m=2", 5).unwrap()).unwrap();
        for kind in [StrategyKind::HighDegree, StrategyKind::HighBetweenness] {
            let s = RemovalStrategy::new(kind, 9);
            assert_eq!(percolate(&g, s, 1, 0.01).unwrap(), percolate(&g, s, 1, 0.01).unwrap());
        }
    }

    #[test]
    fn high_betweenness_picks_cut_vertex() {
        // Bridge node x between two triangles has the largest betweenness.
        let g = graph(&[("a", "b"), ("b", "c"), ("a", "c"), ("c", "x"), ("x", "p"), ("p", "q"), ("q", "r"), ("p", "r")]);
        let order = strategy_order(&g, RemovalStrategy::new(StrategyKind::HighBetweenness, 0));
        assert_eq!(order[0], id("x"));
        assert_eq!(order.len(), g.node_count());
    }

    #[test]
    fn hub_removal_on_star() {
        let r = hub_removal_cumulative(&star(10), 1).unwrap();
        assert_eq!(r.initial.component_count, 1);
        assert_eq!(r.steps[0].state.component_count, 9);
        assert_eq!(r.steps[0].removed, NodeId::from(0));
        assert_eq!(r.steps[0].degree, 9);
        assert_eq!(r.steps[0].state.remaining_capacity_sat, 0);
        assert_eq!(r.steps[0].state.mean_shortest_path, None);
        assert!(hub_removal_cumulative(&star(3), 4).is_err());
    }

    #[test]
    fn single_hub_removal_cases() {
        let tri = graph(&[("a", "b"), ("b", "c"), ("a", "c")]);
        assert!(hub_removal_single(&tri, 3).unwrap().iter().all(|r| r.component_count == 1));
        let bowtie = graph(&[("a", "b"), ("b", "x"), ("a", "x"), ("x", "p"), ("p", "q"), ("x", "q")]);
        let r = hub_removal_single(&bowtie, 1).unwrap();
        assert_eq!((r[0].node.as_str(), r[0].component_count), ("x", 2));
    }

    #[test]
    fn capacity_degradation_cases() {
        let g = graph(&[("a", "b"), ("b", "c")]);
        let pts = capacity_degradation(&g, &[]).unwrap();
        assert_eq!(pts, vec![CapacityPoint { nodes_removed: 0, remaining_capacity_fraction: 1.0 }]);
        let single = graph(&[("a", "b")]);
        let pts = capacity_degradation(&single, &[id("a")]).unwrap();
        assert_eq!(pts[1].remaining_capacity_fraction, 0.0);
        assert!(capacity_degradation(&g, &[id("a"), id("a")]).is_err());
        let all = capacity_degradation(&g, &hub_order(&g)).unwrap();
        assert!(all.windows(2).all(|w| w[1].remaining_capacity_fraction <= w[0].remaining_capacity_fraction));
        assert_eq!(all.last().unwrap().remaining_capacity_fraction, 0.0);
    }

    #[test]
    fn reinforce_star_leaves() {
        let g = star(10);
        let r = reinforce_periphery(&g, 1, 4, 7).unwrap();
        assert_eq!(r.edge_count(), 9 + 4);
        let leaf_edges = r.edges().filter(|e| e.u.as_str() != "0" && e.v.as_str() != "0").count();
        assert_eq!(leaf_edges, 4);
        assert!(r.edges().filter(|e| e.u.as_str() != "0").all(|e| e.capacity == REINFORCEMENT_CAPACITY));
        assert_eq!(reinforce_periphery(&g, 1, 0, 7).unwrap(), g);
        // Dense request switches to enumeration: all 36 leaf pairs.
        assert_eq!(reinforce_periphery(&g, 1, 36, 7).unwrap().edge_count(), 9 + 36);
        assert!(reinforce_periphery(&g, 1, 37, 7).is_err());
        assert!(reinforce_periphery(&graph(&[("a", "b"), ("b", "c"), ("a", "c")]), 1, 1, 7).is_err());
    }
}
