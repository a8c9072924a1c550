//! Summary statistics, centralities and clustering.
//!
//! All path-based quantities are unweighted (hop counts); capacities only
//! enter the total-capacity figure.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig6;
use crate::graph::{self, Graph, NodeId};
use crate::rng;

pub const SAT_PER_BTC: f64 = 1e8;

/// `2|E| / (|V| (|V| - 1))`.
pub fn density(g: &Graph) -> Result<f64> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::domain("density needs at least two nodes"));
    }
    Ok(2.0 * g.edge_count() as f64 / (n as f64 * (n as f64 - 1.0)))
}

/// Number of triangles through each node.
pub(crate) fn triangles_per_node(adj: &[Vec<usize>]) -> Vec<u64> {
    let n = adj.len();
    let mut marked = vec![false; n];
    let mut out = vec![0u64; n];
    for u in 0..n {
        for &v in &adj[u] {
            marked[v] = true;
        }
        let mut links = 0u64;
        for &v in &adj[u] {
            links += adj[v].iter().filter(|&&w| marked[w]).count() as u64;
        }
        out[u] = links / 2;
        for &v in &adj[u] {
            marked[v] = false;
        }
    }
    out
}

fn pairs(d: usize) -> u64 {
    (d as u64) * (d as u64).saturating_sub(1) / 2
}

/// `3 * triangles / connected triples`.
pub fn transitivity(g: &Graph) -> Result<f64> {
    let adj = g.adjacency();
    let triples: u64 = adj.iter().map(|l| pairs(l.len())).sum();
    if triples == 0 {
        return Err(Error::undefined("transitivity of a graph without connected triples"));
    }
    // Each triangle is seen once from each of its corners.
    let corner_triangles: u64 = triangles_per_node(adj).iter().sum();
    Ok(corner_triangles as f64 / triples as f64)
}

fn clustering_from(triangles: u64, degree: usize) -> f64 {
    if degree < 2 {
        0.0
    } else {
        triangles as f64 / pairs(degree) as f64
    }
}

/// Share of neighbor pairs of `u` that are linked; 0 when `deg(u) < 2`.
pub fn local_clustering(g: &Graph, u: &NodeId) -> Result<f64> {
    let i = g.require(u)?;
    let adj = g.adjacency();
    let mut links = 0u64;
    for (k, &v) in adj[i].iter().enumerate() {
        for &w in &adj[i][k + 1..] {
            if adj[v].binary_search(&w).is_ok() {
                links += 1;
            }
        }
    }
    Ok(clustering_from(links, adj[i].len()))
}

pub fn average_clustering(g: &Graph) -> Result<f64> {
    if g.is_empty() {
        return Err(Error::domain("average clustering of an empty graph"));
    }
    let scores = clustering_scores(g);
    Ok(scores.scores.values().sum::<f64>() / g.node_count() as f64)
}

/// Pearson correlation of the degrees at either end of an edge, each edge
/// counted in both orientations.
pub fn degree_assortativity(g: &Graph) -> Result<f64> {
    let adj = g.adjacency();
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::undefined("assortativity of a graph without edges"));
    }
    let deg = |i: usize| adj[i].len() as f64;
    let ends = (2 * m) as f64;
    let mean = g
        .edge_records()
        .iter()
        .map(|e| deg(e.a) + deg(e.b))
        .sum::<f64>()
        / ends;
    let mut cov = 0.0;
    let mut var = 0.0;
    for e in g.edge_records() {
        let (x, y) = (deg(e.a) - mean, deg(e.b) - mean);
        cov += 2.0 * x * y;
        var += x * x + y * y;
    }
    if var <= 1e-12 * ends * mean * mean {
        return Err(Error::undefined("assortativity with zero degree variance"));
    }
    Ok(cov / var)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SMetric {
    pub raw: f64,
    /// `raw / s_max`, with `s_max` from a greedy high-degree-first realization
    /// of the same degree sequence (never below `raw`).
    pub normalized: f64,
}

/// `sum over edges (u, v) of deg(u) deg(v)`.
pub fn s_metric(g: &Graph) -> Result<SMetric> {
    if g.edge_count() == 0 {
        return Err(Error::domain("s-metric of a graph without edges"));
    }
    let degrees = g.degrees();
    let raw: f64 = g
        .edge_records()
        .iter()
        .map(|e| degrees[e.a] as f64 * degrees[e.b] as f64)
        .sum();

    let mut order: Vec<usize> = (0..degrees.len()).filter(|&i| degrees[i] > 0).collect();
    order.sort_by(|&a, &b| degrees[b].cmp(&degrees[a]).then(a.cmp(&b)));
    let mut stubs: Vec<usize> = order.iter().map(|&i| degrees[i]).collect();
    let mut greedy = 0.0;
    for x in 0..order.len() {
        for y in x + 1..order.len() {
            if stubs[x] == 0 {
                break;
            }
            if stubs[y] > 0 {
                stubs[x] -= 1;
                stubs[y] -= 1;
                greedy += degrees[order[x]] as f64 * degrees[order[y]] as f64;
            }
        }
    }
    // The graph itself realizes the sequence, so it bounds s_max from below.
    let s_max = greedy.max(raw);
    Ok(SMetric {
        raw,
        normalized: raw / s_max,
    })
}

/// Greedy maximal independent set: nodes taken in ascending degree order,
/// ties in a seed-shuffled order. Returned sorted.
pub fn maximal_independent_set(g: &Graph, seed: u64) -> Vec<NodeId> {
    let adj = g.adjacency();
    let n = adj.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::master(seed));
    order.sort_by_key(|&i| adj[i].len());
    let mut blocked = vec![false; n];
    let mut chosen = Vec::new();
    for i in order {
        if !blocked[i] {
            chosen.push(i);
            blocked[i] = true;
            for &j in &adj[i] {
                blocked[j] = true;
            }
        }
    }
    chosen.sort_unstable();
    chosen.into_iter().map(|i| g.nodes()[i].clone()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CentralityKind {
    Betweenness,
    Closeness,
    LocalClustering,
    Degree,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CentralityScores {
    pub kind: CentralityKind,
    pub scores: BTreeMap<NodeId, f64>,
}

impl CentralityScores {
    fn from_vec(g: &Graph, kind: CentralityKind, values: Vec<f64>) -> Self {
        CentralityScores {
            kind,
            scores: g.nodes().iter().cloned().zip(values).collect(),
        }
    }

    pub fn get(&self, id: &NodeId) -> Option<f64> {
        self.scores.get(id).copied()
    }
}

/// Sources per work unit; depends only on `n` so the floating-point reduction
/// order is the same for any thread count.
fn source_chunk(n: usize) -> usize {
    (n / 64).max(16)
}

/// Compressed adjacency for the hot betweenness loop.
struct Csr {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl Csr {
    fn new(adj: &[Vec<usize>]) -> Csr {
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        let mut targets = Vec::with_capacity(adj.iter().map(Vec::len).sum());
        offsets.push(0);
        for list in adj {
            targets.extend(list.iter().map(|&w| w as u32));
            offsets.push(targets.len() as u32);
        }
        Csr { offsets, targets }
    }

    #[inline]
    fn neighbors(&self, v: u32) -> &[u32] {
        &self.targets[self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize]
    }
}

/// Unnormalized undirected betweenness via single-source dependency
/// accumulation; every unordered pair contributes once.
pub(crate) fn brandes(adj: &[Vec<usize>]) -> Vec<f64> {
    const UNSEEN: u32 = u32::MAX;
    let n = adj.len();
    if n == 0 {
        return Vec::new();
    }
    let csr = Csr::new(adj);
    // A leaf's dependencies equal those of its neighbor, so leaves hanging off
    // a non-leaf are folded into that neighbor's source weight.
    let mut weight = vec![1.0f64; n];
    for (u, list) in adj.iter().enumerate() {
        if let [v] = list[..] {
            if adj[v].len() > 1 {
                weight[u] = 0.0;
                weight[v] += 1.0;
            }
        }
    }
    let sources: Vec<u32> = (0..n as u32).filter(|&s| weight[s as usize] > 0.0).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(source_chunk(n))
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            let mut sigma = vec![0.0f64; n];
            let mut dist = vec![UNSEEN; n];
            let mut delta = vec![0.0f64; n];
            // BFS queue; afterwards the nodes in non-decreasing distance.
            let mut order: Vec<u32> = Vec::with_capacity(n);
            // Shortest-path DAG edges (predecessor, successor) in discovery order.
            let mut dag: Vec<(u32, u32)> = Vec::with_capacity(csr.targets.len());
            for &s in chunk {
                order.clear();
                dag.clear();
                sigma[s as usize] = 1.0;
                dist[s as usize] = 0;
                order.push(s);
                let mut head = 0;
                while head < order.len() {
                    let v = order[head];
                    head += 1;
                    let (next, sv) = (dist[v as usize] + 1, sigma[v as usize]);
                    for &w in csr.neighbors(v) {
                        let d = &mut dist[w as usize];
                        if *d == UNSEEN {
                            *d = next;
                            order.push(w);
                        } else if *d != next {
                            continue;
                        }
                        sigma[w as usize] += sv;
                        dag.push((v, w));
                    }
                }
                // Successors are finished before any edge into them is visited.
                for &(v, w) in dag.iter().rev() {
                    let (v, w) = (v as usize, w as usize);
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
                }
                let ws = weight[s as usize];
                for &v in &order[1..] {
                    acc[v as usize] += ws * delta[v as usize];
                }
                // Each folded leaf reaches every other node through `s`.
                acc[s as usize] += (ws - 1.0) * (order.len() as f64 - 2.0);
                for &v in &order {
                    let v = v as usize;
                    sigma[v] = 0.0;
                    dist[v] = UNSEEN;
                    delta[v] = 0.0;
                }
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    total.iter_mut().for_each(|t| *t /= 2.0);
    total
}

/// Shortest-path betweenness, unnormalized, endpoints excluded.
pub fn betweenness(g: &Graph) -> CentralityScores {
    CentralityScores::from_vec(g, CentralityKind::Betweenness, brandes(g.adjacency()))
}

/// `N / sum of distances`, with `N` the size of the node's component; 0 for isolated nodes.
pub fn closeness(g: &Graph) -> CentralityScores {
    let adj = g.adjacency();
    let n = adj.len();
    let values: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|s| {
            let dist = graph::bfs(adj, s);
            let (reached, total) = dist
                .iter()
                .filter(|&&d| d != graph::UNREACHED)
                .fold((0u64, 0u64), |(c, t), &d| (c + 1, t + d as u64));
            if total == 0 {
                0.0
            } else {
                reached as f64 / total as f64
            }
        })
        .collect();
    CentralityScores::from_vec(g, CentralityKind::Closeness, values)
}

pub fn clustering_scores(g: &Graph) -> CentralityScores {
    let adj = g.adjacency();
    let values = triangles_per_node(adj)
        .into_iter()
        .zip(adj)
        .map(|(t, l)| clustering_from(t, l.len()))
        .collect();
    CentralityScores::from_vec(g, CentralityKind::LocalClustering, values)
}

pub fn degree_centrality(g: &Graph) -> CentralityScores {
    let values = g.degrees().into_iter().map(|d| d as f64).collect();
    CentralityScores::from_vec(g, CentralityKind::Degree, values)
}

/// Every summary statistic of a graph. Undefined quantities are `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryReport {
    pub node_count: usize,
    /// Raw channels before parallel channels were collapsed.
    pub channel_count: usize,
    pub edge_count: usize,
    /// `2|E| / |V|`.
    pub average_degree_std: Option<f64>,
    /// `|E| / |V|`, the convention of the published LN table.
    pub average_degree_paper: Option<f64>,
    pub component_count: usize,
    pub density: Option<f64>,
    pub total_capacity_btc: f64,
    pub s_metric_raw: Option<f64>,
    pub s_metric_normalized: Option<f64>,
    pub mis_size: usize,
    pub bridge_count: usize,
    pub diameter: Option<usize>,
    pub radius: Option<usize>,
    pub mean_shortest_path: Option<f64>,
    pub transitivity: Option<f64>,
    pub avg_clustering: Option<f64>,
    pub degree_assortativity: Option<f64>,
}

pub fn summarize(g: &Graph, raw_channel_count: usize, seed: u64) -> SummaryReport {
    let n = g.node_count();
    let m = g.edge_count();
    let per_node = |x: f64| (n > 0).then(|| x / n as f64);
    let smetric = s_metric(g).ok();
    let distances = g.distance_summary().ok();
    SummaryReport {
        node_count: n,
        channel_count: raw_channel_count,
        edge_count: m,
        average_degree_std: per_node(2.0 * m as f64),
        average_degree_paper: per_node(m as f64),
        component_count: g.component_count(),
        density: density(g).ok(),
        total_capacity_btc: g.total_capacity() as f64 / SAT_PER_BTC,
        s_metric_raw: smetric.map(|s| s.raw),
        s_metric_normalized: smetric.map(|s| s.normalized),
        mis_size: maximal_independent_set(g, seed).len(),
        bridge_count: g.bridges().len(),
        diameter: distances.map(|d| d.diameter),
        radius: distances.map(|d| d.radius),
        mean_shortest_path: distances.map(|d| d.mean_shortest_path),
        transitivity: transitivity(g).ok(),
        avg_clustering: average_clustering(g).ok(),
        degree_assortativity: degree_assortativity(g).ok(),
    }
}

impl SummaryReport {
    /// `(label, value)` rows in the order of the published LN overview table,
    /// with the extra convention rows placed next to their counterparts.
    pub fn rows(&self) -> Vec<(&'static str, String)> {
        let f = |x: Option<f64>| x.map(sig6).unwrap_or_else(|| "null".into());
        let i = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_else(|| "null".into());
        vec![
            ("Number of nodes", self.node_count.to_string()),
            ("Number of payment channels", self.channel_count.to_string()),
            ("Number of edges (collapsed)", self.edge_count.to_string()),
            ("Average degree", f(self.average_degree_paper)),
            ("Average degree (2|E|/|V|)", f(self.average_degree_std)),
            ("Connected components", self.component_count.to_string()),
            ("Density", f(self.density)),
            ("Total BTC held", sig6(self.total_capacity_btc)),
            ("s-metric", f(self.s_metric_normalized)),
            ("s-metric (raw)", f(self.s_metric_raw)),
            ("Maximal independent set", self.mis_size.to_string()),
            ("Bridges", self.bridge_count.to_string()),
            ("Diameter", i(self.diameter)),
            ("Radius", i(self.radius)),
            ("Mean shortest path", f(self.mean_shortest_path)),
            ("Transitivity", f(self.transitivity)),
            ("Average clustering coefficient", f(self.avg_clustering)),
            ("Degree assortativity", f(self.degree_assortativity)),
        ]
    }

    pub fn to_table(&self) -> String {
        let rows = self.rows();
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        out
    }
}
