//! Immutable undirected simple graph with capacity-weighted edges.
//!
//! Nodes are stored in ascending [`NodeId`] order and addressed internally by
//! their position in that order, so every traversal visits nodes
//! deterministically. Parallel channels between the same pair of nodes are
//! collapsed into a single [`Edge`] whose capacity is the sum of the raw
//! capacities.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(Error::InvalidNodeId("empty identifier".into()));
        }
        Ok(NodeId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i.to_string())
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A collapsed channel. `u < v` always holds.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub capacity: u64,
    pub channel_count: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct EdgeRecord {
    pub a: usize,
    pub b: usize,
    pub capacity: u64,
    pub channel_count: u32,
}

#[derive(Clone, Debug)]
pub struct Graph {
    ids: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    adj: Vec<Vec<usize>>,
    edges: Vec<EdgeRecord>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.edges == other.edges
    }
}

impl Eq for Graph {}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceSummary {
    pub diameter: usize,
    pub radius: usize,
    pub mean_shortest_path: f64,
}

impl Graph {
    /// Builds a graph from a node list and raw channels `(u, v, capacity)`.
    ///
    /// Duplicate node ids are merged, self-loops are dropped and parallel
    /// channels are collapsed.
    pub fn build<I, E>(nodes: I, raw_edges: E) -> Result<Graph>
    where
        I: IntoIterator<Item = NodeId>,
        E: IntoIterator<Item = (NodeId, NodeId, u64)>,
    {
        let mut ids: Vec<NodeId> = nodes.into_iter().collect();
        ids.sort();
        ids.dedup();
        let index: HashMap<NodeId, usize> =
            ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();

        let mut collapsed: BTreeMap<(usize, usize), (u64, u32)> = BTreeMap::new();
        for (edge_index, (u, v, capacity)) in raw_edges.into_iter().enumerate() {
            let lookup = |n: &NodeId| {
                index.get(n).copied().ok_or_else(|| Error::UnknownEndpoint {
                    edge_index,
                    u: u.to_string(),
                    v: v.to_string(),
                    missing: n.to_string(),
                })
            };
            let (a, b) = (lookup(&u)?, lookup(&v)?);
            if a == b {
                continue;
            }
            let key = (a.min(b), a.max(b));
            let slot = collapsed.entry(key).or_insert((0, 0));
            slot.0 = slot.0.saturating_add(capacity);
            slot.1 += 1;
        }

        let edges: Vec<EdgeRecord> = collapsed
            .into_iter()
            .map(|((a, b), (capacity, channel_count))| EdgeRecord {
                a,
                b,
                capacity,
                channel_count,
            })
            .collect();
        Ok(Self::from_parts(ids, index, edges))
    }

    fn from_parts(ids: Vec<NodeId>, index: HashMap<NodeId, usize>, edges: Vec<EdgeRecord>) -> Graph {
        let mut adj = vec![Vec::new(); ids.len()];
        for e in &edges {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph {
            ids,
            index,
            adj,
            edges,
        }
    }

    /// Node-induced subgraph on the nodes with `keep[i]`.
    pub(crate) fn induced(&self, keep: &[bool]) -> Graph {
        let mut remap = vec![usize::MAX; self.ids.len()];
        let mut ids = Vec::new();
        for (i, id) in self.ids.iter().enumerate() {
            if keep[i] {
                remap[i] = ids.len();
                ids.push(id.clone());
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| keep[e.a] && keep[e.b])
            .map(|e| EdgeRecord {
                a: remap[e.a],
                b: remap[e.b],
                ..*e
            })
            .collect();
        let index = ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
        Self::from_parts(ids, index, edges)
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Nodes in ascending id order.
    pub fn nodes(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn contains(&self, id: &NodeId) -> bool {
        self.index.contains_key(id)
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().map(|e| self.edge_at(e))
    }

    pub fn edge(&self, u: &NodeId, v: &NodeId) -> Option<Edge> {
        let (a, b) = (*self.index.get(u)?, *self.index.get(v)?);
        let key = (a.min(b), a.max(b));
        self.edges
            .binary_search_by(|e| (e.a, e.b).cmp(&key))
            .ok()
            .map(|i| self.edge_at(&self.edges[i]))
    }

    fn edge_at(&self, e: &EdgeRecord) -> Edge {
        Edge {
            u: self.ids[e.a].clone(),
            v: self.ids[e.b].clone(),
            capacity: e.capacity,
            channel_count: e.channel_count,
        }
    }

    pub fn degree(&self, id: &NodeId) -> Result<usize> {
        Ok(self.adj[self.require(id)?].len())
    }

    pub fn neighbors(&self, id: &NodeId) -> Result<impl Iterator<Item = &NodeId> + '_> {
        let i = self.require(id)?;
        Ok(self.adj[i].iter().map(move |&j| &self.ids[j]))
    }

    /// Degree of every node, in node order.
    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    /// Sum of collapsed edge capacities in satoshi.
    pub fn total_capacity(&self) -> u64 {
        self.edges.iter().map(|e| e.capacity).sum()
    }

    /// Number of raw channels the collapsed edges stand for.
    pub fn channel_count(&self) -> usize {
        self.edges.iter().map(|e| e.channel_count as usize).sum()
    }

    pub(crate) fn index_of(&self, id: &NodeId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub(crate) fn require(&self, id: &NodeId) -> Result<usize> {
        self.index_of(id)
            .ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    pub(crate) fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    pub(crate) fn edge_records(&self) -> &[EdgeRecord] {
        &self.edges
    }

    /// Connected components, largest first; equal sizes ordered by their smallest node id.
    /// Each component lists its nodes in ascending order.
    pub fn connected_components(&self) -> Vec<Vec<NodeId>> {
        component_partition(&self.adj, None)
            .into_iter()
            .map(|c| c.into_iter().map(|i| self.ids[i].clone()).collect())
            .collect()
    }

    pub fn component_count(&self) -> usize {
        component_partition(&self.adj, None).len()
    }

    /// Induced subgraph on the largest connected component.
    pub fn giant_component(&self) -> Result<Graph> {
        let comps = component_partition(&self.adj, None);
        let Some(giant) = comps.first() else {
            return Err(Error::domain("giant component of an empty graph"));
        };
        if giant.len() == self.node_count() {
            return Ok(self.clone());
        }
        let mut keep = vec![false; self.node_count()];
        for &i in giant {
            keep[i] = true;
        }
        Ok(self.induced(&keep))
    }

    /// Edges whose deletion increases the number of connected components.
    pub fn bridges(&self) -> Vec<Edge> {
        bridge_pairs(&self.adj)
            .into_iter()
            .map(|(a, b)| {
                let i = self
                    .edges
                    .binary_search_by(|e| (e.a, e.b).cmp(&(a, b)))
                    .expect("bridge is an edge");
                self.edge_at(&self.edges[i])
            })
            .collect()
    }

    /// Hop counts from `source`; unreachable nodes are omitted.
    pub fn bfs_distances(&self, source: &NodeId) -> Result<BTreeMap<NodeId, usize>> {
        let s = self.require(source)?;
        let dist = bfs(&self.adj, s);
        Ok(dist
            .into_iter()
            .enumerate()
            .filter(|(_, d)| *d != UNREACHED)
            .map(|(i, d)| (self.ids[i].clone(), d))
            .collect())
    }

    /// Diameter, radius and mean shortest path of the giant component.
    pub fn distance_summary(&self) -> Result<DistanceSummary> {
        let giant = self.giant_component()?;
        let n = giant.node_count();
        if n < 2 {
            return Err(Error::domain(
                "distance summary needs at least two nodes in the giant component",
            ));
        }
        let stats = all_pairs_stats(&giant.adj);
        Ok(DistanceSummary {
            diameter: stats.eccentricities.iter().copied().max().unwrap_or(0),
            radius: stats.eccentricities.iter().copied().min().unwrap_or(0),
            mean_shortest_path: stats.distance_sum as f64 / stats.pair_count as f64,
        })
    }

    /// A new graph without `victims` and their incident edges.
    pub fn remove_nodes<'a, I>(&self, victims: I) -> Result<Graph>
    where
        I: IntoIterator<Item = &'a NodeId>,
    {
        let mut keep = vec![true; self.node_count()];
        for v in victims {
            keep[self.require(v)?] = false;
        }
        Ok(self.induced(&keep))
    }

    /// A new graph with extra channels added on top of the existing edges.
    pub fn with_added_edges<I>(&self, extra: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (NodeId, NodeId, u64)>,
    {
        let mut collapsed: BTreeMap<(usize, usize), (u64, u32)> = self
            .edges
            .iter()
            .map(|e| ((e.a, e.b), (e.capacity, e.channel_count)))
            .collect();
        for (edge_index, (u, v, capacity)) in extra.into_iter().enumerate() {
            let lookup = |n: &NodeId| {
                self.index_of(n).ok_or_else(|| Error::UnknownEndpoint {
                    edge_index,
                    u: u.to_string(),
                    v: v.to_string(),
                    missing: n.to_string(),
                })
            };
            let (a, b) = (lookup(&u)?, lookup(&v)?);
            if a == b {
                continue;
            }
            let slot = collapsed.entry((a.min(b), a.max(b))).or_insert((0, 0));
            slot.0 = slot.0.saturating_add(capacity);
            slot.1 += 1;
        }
        let edges = collapsed
            .into_iter()
            .map(|((a, b), (capacity, channel_count))| EdgeRecord {
                a,
                b,
                capacity,
                channel_count,
            })
            .collect();
        Ok(Self::from_parts(self.ids.clone(), self.index.clone(), edges))
    }
}

pub(crate) const UNREACHED: usize = usize::MAX;

/// Single-source BFS hop counts over an index adjacency.
pub(crate) fn bfs(adj: &[Vec<usize>], source: usize) -> Vec<usize> {
    let mut dist = vec![UNREACHED; adj.len()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if dist[w] == UNREACHED {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Components over the nodes with `alive[i]` (all nodes when `None`),
/// sorted by size descending then smallest index.
pub(crate) fn component_partition(adj: &[Vec<usize>], alive: Option<&[bool]>) -> Vec<Vec<usize>> {
    let n = adj.len();
    let is_alive = |i: usize| alive.map_or(true, |a| a[i]);
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if seen[start] || !is_alive(start) {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        stack.push(start);
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] && is_alive(w) {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    // Components are discovered in order of their smallest index, so a stable sort keeps the tie rule.
    comps.sort_by(|a, b| b.len().cmp(&a.len()));
    comps
}

/// Bridges as `(a, b)` index pairs with `a < b`, sorted. Iterative low-link DFS.
pub(crate) fn bridge_pairs(adj: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let n = adj.len();
    let mut disc = vec![UNREACHED; n];
    let mut low = vec![0usize; n];
    let mut out = Vec::new();
    let mut timer = 0;
    // (node, parent, next neighbor position)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != UNREACHED {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        stack.push((root, UNREACHED, 0));
        while let Some(&mut (v, parent, ref mut pos)) = stack.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if w == parent {
                    continue;
                }
                if disc[w] == UNREACHED {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, v, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != UNREACHED {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] > disc[parent] {
                        out.push((parent.min(v), parent.max(v)));
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

pub(crate) struct AllPairsStats {
    pub eccentricities: Vec<usize>,
    /// Sum of hop counts over ordered reachable pairs `u != v`.
    pub distance_sum: u64,
    pub pair_count: u64,
}

/// BFS from every node. Eccentricity only counts reachable nodes.
pub(crate) fn all_pairs_stats(adj: &[Vec<usize>]) -> AllPairsStats {
    let n = adj.len();
    let mut eccentricities = vec![0; n];
    let mut distance_sum = 0u64;
    let mut pair_count = 0u64;
    let mut dist = vec![UNREACHED; n];
    let mut queue = VecDeque::with_capacity(n);
    for s in 0..n {
        dist.iter_mut().for_each(|d| *d = UNREACHED);
        dist[s] = 0;
        queue.push_back(s);
        let mut ecc = 0;
        while let Some(v) = queue.pop_front() {
            let d = dist[v];
            ecc = ecc.max(d);
            if v != s {
                distance_sum += d as u64;
                pair_count += 1;
            }
            for &w in &adj[v] {
                if dist[w] == UNREACHED {
                    dist[w] = d + 1;
                    queue.push_back(w);
                }
            }
        }
        eccentricities[s] = ecc;
    }
    AllPairsStats {
        eccentricities,
        distance_sum,
        pair_count,
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn id(s: &str) -> NodeId {
        NodeId::new(s).unwrap()
    }

    /// Graph from `(u, v)` pairs with unit capacity; nodes are inferred.
    pub(crate) fn graph(edges: &[(&str, &str)]) -> Graph {
        let mut nodes: Vec<NodeId> = edges.iter().flat_map(|(u, v)| [id(u), id(v)]).collect();
        nodes.sort();
        nodes.dedup();
        Graph::build(nodes, edges.iter().map(|(u, v)| (id(u), id(v), 1))).unwrap()
    }

    pub(crate) fn kite() -> Graph {
        graph(&[("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
    }

    pub(crate) fn star(n: usize) -> Graph {
        let nodes: Vec<NodeId> = (0..n).map(NodeId::from).collect();
        let edges: Vec<_> = (1..n).map(|i| (NodeId::from(0), NodeId::from(i), 1)).collect();
        Graph::build(nodes, edges).unwrap()
    }

    fn set(ids: &[&str]) -> Vec<NodeId> {
        ids.iter().map(|s| id(s)).collect()
    }

    #[test]
    fn parallel_channels_collapse() {
        let g = Graph::build(set(&["a", "b"]), vec![(id("a"), id("b"), 10), (id("b"), id("a"), 5)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        let e = g.edges().next().unwrap();
        assert_eq!((e.capacity, e.channel_count), (15, 2));
        assert_eq!(g.channel_count(), 2);
    }

    #[test]
    fn self_loop_dropped() {
        let g = Graph::build(set(&["a"]), vec![(id("a"), id("a"), 7)]).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (1, 0));
    }

    #[test]
    fn unknown_endpoint_is_structural_error() {
        let err = Graph::build(set(&["a", "b"]), vec![(id("a"), id("c"), 1)]).unwrap_err();
        match err {
            Error::UnknownEndpoint { edge_index, missing, .. } => {
                assert_eq!(edge_index, 0);
                assert_eq!(missing, "c");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn components_of_path_and_disjoint_edges() {
        assert_eq!(graph(&[("a", "b"), ("b", "c")]).connected_components(), vec![set(&["a", "b", "c"])]);
        let g = graph(&[("a", "b"), ("c", "d")]);
        assert_eq!(g.connected_components(), vec![set(&["a", "b"]), set(&["c", "d"])]);
    }

    #[test]
    fn giant_component_cases() {
        // Two triangles plus an isolated node: tie goes to the triangle holding the smallest id.
        let nodes = set(&["a", "b", "c", "x", "y", "z", "q"]);
        let edges = [("a", "b"), ("b", "c"), ("a", "c"), ("x", "y"), ("y", "z"), ("x", "z")];
        let g = Graph::build(nodes, edges.iter().map(|(u, v)| (id(u), id(v), 1))).unwrap();
        let giant = g.giant_component().unwrap();
        assert_eq!(giant.nodes(), set(&["a", "b", "c"]).as_slice());
        assert_eq!(giant.edge_count(), 3);

        let k = kite();
        assert_eq!(k.giant_component().unwrap(), k);

        let mut edges: Vec<(&str, &str)> = vec![("h", "1"), ("h", "2"), ("h", "3"), ("h", "4")];
        edges.push(("p", "q"));
        let g = graph(&edges);
        assert_eq!(g.giant_component().unwrap().node_count(), 5);

        let empty = Graph::build(Vec::new(), Vec::new()).unwrap();
        assert!(matches!(empty.giant_component(), Err(Error::Domain(_))));
    }

    #[test]
    fn bridges_tree_and_cycle() {
        let tree = graph(&[("a", "b"), ("b", "c"), ("b", "d"), ("d", "e")]);
        assert_eq!(tree.bridges().len(), 4);
        let cycle = graph(&[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]);
        assert!(cycle.bridges().is_empty());
        // Two triangles joined by one edge: only the joining edge.
        let g = graph(&[("a", "b"), ("b", "c"), ("a", "c"), ("c", "x"), ("x", "y"), ("y", "z"), ("x", "z")]);
        let b = g.bridges();
        assert_eq!(b.len(), 1);
        assert_eq!((b[0].u.as_str(), b[0].v.as_str()), ("c", "x"));
    }

    #[test]
    fn bfs_examples() {
        let path = graph(&[("a", "b"), ("b", "c")]);
        let d = path.bfs_distances(&id("a")).unwrap();
        assert_eq!(d.values().copied().collect::<Vec<_>>(), vec![0, 1, 2]);

        let s = star(6);
        let d = s.bfs_distances(&NodeId::from(0)).unwrap();
        assert!(d.iter().all(|(k, &v)| if k.as_str() == "0" { v == 0 } else { v == 1 }));

        let k = kite().bfs_distances(&id("c")).unwrap();
        let expect: BTreeMap<NodeId, usize> =
            [("a", 1), ("b", 1), ("c", 0), ("d", 2)].iter().map(|(k, v)| (id(k), *v)).collect();
        assert_eq!(k, expect);

        assert!(matches!(path.bfs_distances(&id("zz")), Err(Error::UnknownNode(_))));
    }

    #[test]
    fn distance_summary_examples() {
        let p4 = graph(&[("a", "b"), ("b", "c"), ("c", "d")]);
        let s = p4.distance_summary().unwrap();
        assert_eq!((s.diameter, s.radius), (3, 2));
        assert!((s.mean_shortest_path - 5.0 / 3.0).abs() < 1e-12);

        let names = ["a", "b", "c", "d", "e"];
        let mut k5 = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                k5.push((names[i], names[j]));
            }
        }
        let s = graph(&k5).distance_summary().unwrap();
        assert_eq!((s.diameter, s.radius, s.mean_shortest_path), (1, 1, 1.0));

        let single = Graph::build(set(&["a"]), Vec::new()).unwrap();
        assert!(single.distance_summary().is_err());
    }

    #[test]
    fn remove_nodes_examples() {
        let s = star(6);
        let r = s.remove_nodes([&NodeId::from(0)]).unwrap();
        assert_eq!((r.node_count(), r.edge_count(), r.component_count()), (5, 0, 5));
        assert_eq!(s.edge_count(), 5);

        let k = kite();
        assert_eq!(k.remove_nodes(std::iter::empty()).unwrap(), k);

        let tri = graph(&[("a", "b"), ("b", "c"), ("a", "c")]);
        let r = tri.remove_nodes([&id("a")]).unwrap();
        assert_eq!((r.node_count(), r.edge_count()), (2, 1));

        assert!(tri.remove_nodes([&id("q")]).is_err());
    }

    #[test]
    fn added_edges_keep_channel_counts() {
        let g = Graph::build(set(&["a", "b", "c"]), vec![(id("a"), id("b"), 10), (id("a"), id("b"), 5)]).unwrap();
        let h = g.with_added_edges([(id("b"), id("c"), 1)]).unwrap();
        assert_eq!(h.edge(&id("a"), &id("b")).unwrap().channel_count, 2);
        assert_eq!(h.edge(&id("a"), &id("b")).unwrap().capacity, 15);
        assert_eq!(h.edge_count(), 2);
    }
}
