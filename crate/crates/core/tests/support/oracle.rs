#![allow(dead_code)]

//! Naive reference implementations on a dense adjacency matrix. Nothing here
//! shares code with the library; everything is quadratic or worse on purpose.

use lntopo_core::{Graph, NodeId};
use std::collections::HashMap;

pub struct Dense {
    pub ids: Vec<NodeId>,
    pub adj: Vec<Vec<bool>>,
}

impl Dense {
    pub fn new(g: &Graph) -> Dense {
        let ids: Vec<NodeId> = g.nodes().to_vec();
        let pos: HashMap<&NodeId, usize> = ids.iter().enumerate().map(|(i, id)| (id, i)).collect();
        let n = ids.len();
        let mut adj = vec![vec![false; n]; n];
        for e in g.edges() {
            let (a, b) = (pos[&e.u], pos[&e.v]);
            adj[a][b] = true;
            adj[b][a] = true;
        }
        Dense { ids, adj }
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    fn edge_count(&self) -> usize {
        let n = self.n();
        (0..n).map(|i| (i + 1..n).filter(|&j| self.adj[i][j]).count()).sum()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&x| x).count()
    }

    /// Floyd-Warshall hop counts; `None` when unreachable.
    pub fn distances(&self) -> Vec<Vec<Option<usize>>> {
        let n = self.n();
        let mut d = vec![vec![None; n]; n];
        for i in 0..n {
            d[i][i] = Some(0);
            for j in 0..n {
                if self.adj[i][j] {
                    d[i][j] = Some(1);
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                        if d[i][j].is_none_or(|c| a + b < c) {
                            d[i][j] = Some(a + b);
                        }
                    }
                }
            }
        }
        d
    }

    /// Number of shortest paths between every pair, by dynamic programming
    /// over the distance matrix.
    fn path_counts(&self, d: &[Vec<Option<usize>>]) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut sigma = vec![vec![0.0; n]; n];
        for s in 0..n {
            let mut by_dist: Vec<usize> = (0..n).filter(|&t| d[s][t].is_some()).collect();
            by_dist.sort_by_key(|&t| d[s][t]);
            for &t in &by_dist {
                if t == s {
                    sigma[s][t] = 1.0;
                    continue;
                }
                let dt = d[s][t].unwrap();
                sigma[s][t] = (0..n)
                    .filter(|&u| self.adj[u][t] && d[s][u] == Some(dt - 1))
                    .map(|u| sigma[s][u])
                    .sum();
            }
        }
        sigma
    }

    /// Sum over unordered pairs `{s, t}` of the share of shortest paths through `v`.
    pub fn betweenness(&self) -> Vec<f64> {
        let n = self.n();
        let d = self.distances();
        let sigma = self.path_counts(&d);
        let mut out = vec![0.0; n];
        for v in 0..n {
            for s in 0..n {
                for t in s + 1..n {
                    if v == s || v == t {
                        continue;
                    }
                    if let (Some(st), Some(sv), Some(vt)) = (d[s][t], d[s][v], d[v][t]) {
                        if sv + vt == st {
                            out[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
                        }
                    }
                }
            }
        }
        out
    }

    /// Reachable nodes (self included) over the distance sum.
    pub fn closeness(&self) -> Vec<f64> {
        let d = self.distances();
        d.iter()
            .map(|row| {
                let reach: Vec<usize> = row.iter().flatten().copied().collect();
                let total: usize = reach.iter().sum();
                if total == 0 {
                    0.0
                } else {
                    reach.len() as f64 / total as f64
                }
            })
            .collect()
    }

    fn triangles_at(&self, v: usize) -> usize {
        let n = self.n();
        let mut t = 0;
        for a in 0..n {
            for b in a + 1..n {
                if self.adj[v][a] && self.adj[v][b] && self.adj[a][b] {
                    t += 1;
                }
            }
        }
        t
    }

    pub fn local_clustering(&self) -> Vec<f64> {
        (0..self.n())
            .map(|v| {
                let k = self.degree(v);
                if k < 2 {
                    0.0
                } else {
                    self.triangles_at(v) as f64 / (k * (k - 1) / 2) as f64
                }
            })
            .collect()
    }

    /// Closed triples over connected triples; `None` without triples.
    pub fn transitivity(&self) -> Option<f64> {
        let n = self.n();
        let (mut closed, mut triples) = (0usize, 0usize);
        for centre in 0..n {
            for a in 0..n {
                for b in a + 1..n {
                    if self.adj[centre][a] && self.adj[centre][b] {
                        triples += 1;
                        if self.adj[a][b] {
                            closed += 1;
                        }
                    }
                }
            }
        }
        (triples > 0).then(|| closed as f64 / triples as f64)
    }

    fn component_total(&self, adj: &[Vec<bool>]) -> usize {
        let n = self.n();
        let mut label: Vec<usize> = (0..n).collect();
        // Repeated relaxation until no label shrinks.
        loop {
            let mut changed = false;
            for i in 0..n {
                for j in 0..n {
                    if adj[i][j] && label[j] < label[i] {
                        label[i] = label[j];
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut roots = label;
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }

    /// Components as sorted id lists, largest first, ties by smallest id.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let d = self.distances();
        let n = self.n();
        let mut seen = vec![false; n];
        let mut comps: Vec<Vec<NodeId>> = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut comp: Vec<NodeId> = Vec::new();
            for j in 0..n {
                if d[i][j].is_some() {
                    seen[j] = true;
                    comp.push(self.ids[j].clone());
                }
            }
            comp.sort();
            comps.push(comp);
        }
        comps.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a[0].cmp(&b[0])));
        comps
    }

    /// Edges `(u, v)` with `u < v` whose deletion adds a component.
    pub fn bridges(&self) -> Vec<(NodeId, NodeId)> {
        let n = self.n();
        let base = self.component_total(&self.adj);
        let mut out = Vec::new();
        let mut adj = self.adj.clone();
        for i in 0..n {
            for j in i + 1..n {
                if !self.adj[i][j] {
                    continue;
                }
                adj[i][j] = false;
                adj[j][i] = false;
                if self.component_total(&adj) > base {
                    out.push((self.ids[i].clone(), self.ids[j].clone()));
                }
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
        out.sort();
        out
    }

    /// Diameter, radius and mean distance over the largest component.
    pub fn distance_summary(&self) -> Option<(usize, usize, f64)> {
        let comps = self.components();
        let giant = comps.first()?;
        if giant.len() < 2 {
            return None;
        }
        let idx: Vec<usize> = giant
            .iter()
            .map(|id| self.ids.iter().position(|x| x == id).unwrap())
            .collect();
        let d = self.distances();
        let mut ecc = Vec::new();
        let (mut sum, mut pairs) = (0usize, 0usize);
        for &i in &idx {
            let mut e = 0;
            for &j in &idx {
                let dij = d[i][j].unwrap();
                e = e.max(dij);
                if i != j {
                    sum += dij;
                    pairs += 1;
                }
            }
            ecc.push(e);
        }
        let diameter = *ecc.iter().max().unwrap();
        let radius = *ecc.iter().min().unwrap();
        Some((diameter, radius, sum as f64 / pairs as f64))
    }

    pub fn density(&self) -> Option<f64> {
        let n = self.n();
        (n >= 2).then(|| self.edge_count() as f64 / (n * (n - 1) / 2) as f64)
    }

    pub fn is_maximal_independent(&self, set: &[NodeId]) -> bool {
        let inside: Vec<bool> = self.ids.iter().map(|id| set.contains(id)).collect();
        let n = self.n();
        for i in 0..n {
            for j in 0..n {
                if inside[i] && inside[j] && self.adj[i][j] {
                    return false;
                }
            }
        }
        (0..n).all(|v| inside[v] || (0..n).any(|u| inside[u] && self.adj[u][v]))
    }
}

/// Erdős–Rényi `G(n, p)` edge list on ids `0..n`, from a tiny xorshift stream
/// so the oracle inputs do not depend on the library's generators.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if next() < p {
                edges.push((NodeId::from(i), NodeId::from(j), 1000));
            }
        }
    }
    Graph::build((0..n).map(NodeId::from), edges).unwrap()
}
