//! Snapshot parsing and synthetic graph generation.
//!
//! Two input formats are understood:
//!
//! * a `describegraph`-style JSON document with `nodes` and `edges` arrays
//!   (common field-name variants are accepted, unknown fields ignored);
//! * a whitespace-separated edge list, one `u v capacity` channel per line,
//!   `#` starting a comment.
//!
//! Parsing only surfaces records; consistency (unknown endpoints, self-loops,
//! parallel channels) is handled when the [`Graph`] is built.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::powerlaw::DiscretePowerLaw;
use crate::rng;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotNode {
    pub pub_key: String,
    pub alias: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotChannel {
    pub channel_id: String,
    pub node1: String,
    pub node2: String,
    pub capacity_sat: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Snapshot {
    pub nodes: Vec<SnapshotNode>,
    pub channels: Vec<SnapshotChannel>,
}

impl Snapshot {
    pub fn to_graph(&self) -> Result<Graph> {
        let nodes = self
            .nodes
            .iter()
            .map(|n| NodeId::new(n.pub_key.clone()))
            .collect::<Result<Vec<_>>>()?;
        let edges = self
            .channels
            .iter()
            .map(|c| Ok((NodeId::new(c.node1.clone())?, NodeId::new(c.node2.clone())?, c.capacity_sat)))
            .collect::<Result<Vec<_>>>()?;
        Graph::build(nodes, edges)
    }
}

const NODE_ARRAYS: &[&str] = &["nodes"];
const EDGE_ARRAYS: &[&str] = &["edges", "channels"];
const PUB_KEY: &[&str] = &["pub_key", "pubkey", "node_id", "nodeid", "id"];
const ALIAS: &[&str] = &["alias"];
const CHANNEL_ID: &[&str] = &["channel_id", "short_channel_id", "chan_id", "scid"];
const NODE1: &[&str] = &["node1_pub", "node1", "node_1", "source"];
const NODE2: &[&str] = &["node2_pub", "node2", "node_2", "destination"];
const CAPACITY: &[&str] = &["capacity", "capacity_sat", "satoshis"];

fn lookup<'a>(obj: &'a Map<String, Value>, names: &[&str]) -> Option<&'a Value> {
    names.iter().find_map(|n| obj.get(*n)).filter(|v| !v.is_null())
}

fn field_error(record: &str, field: &str) -> Error {
    Error::Field {
        record: record.to_string(),
        field: field.to_string(),
    }
}

fn string_field(obj: &Map<String, Value>, names: &[&str], record: &str) -> Result<String> {
    match lookup(obj, names) {
        Some(Value::String(s)) if !s.is_empty() => Ok(s.clone()),
        Some(Value::Number(n)) => Ok(n.to_string()),
        _ => Err(field_error(record, names[0])),
    }
}

fn capacity_field(obj: &Map<String, Value>, record: &str) -> Result<u64> {
    match lookup(obj, CAPACITY) {
        Some(Value::Number(n)) => n.as_u64(),
        Some(Value::String(s)) => s.trim().parse().ok(),
        _ => None,
    }
    .ok_or_else(|| field_error(record, CAPACITY[0]))
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let line_start: usize = text
        .split_inclusive('\n')
        .take(line.saturating_sub(1))
        .map(str::len)
        .sum();
    (line_start + column.saturating_sub(1)).min(text.len())
}

/// Parses a `describegraph`-style JSON snapshot.
pub fn parse_snapshot(bytes: &[u8]) -> Result<Snapshot> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        offset: e.valid_up_to(),
        message: "invalid UTF-8".into(),
    })?;
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        offset: byte_offset(text, e.line(), e.column()),
        message: e.to_string(),
    })?;
    let root = doc.as_object().ok_or_else(|| Error::Parse {
        offset: 0,
        message: "top-level value is not an object".into(),
    })?;

    let array = |names: &[&str]| -> Result<&[Value]> {
        match lookup(root, names) {
            None => Ok(&[]),
            Some(Value::Array(items)) => Ok(items.as_slice()),
            Some(_) => Err(field_error("document", names[0])),
        }
    };

    let mut snapshot = Snapshot::default();
    for (i, item) in array(NODE_ARRAYS)?.iter().enumerate() {
        let record = format!("nodes[{i}]");
        let obj = item.as_object().ok_or_else(|| field_error(&record, "pub_key"))?;
        let pub_key = string_field(obj, PUB_KEY, &record)?.to_ascii_lowercase();
        let alias = lookup(obj, ALIAS).and_then(Value::as_str).map(str::to_string);
        snapshot.nodes.push(SnapshotNode { pub_key, alias });
    }
    for (i, item) in array(EDGE_ARRAYS)?.iter().enumerate() {
        let record = format!("edges[{i}]");
        let obj = item.as_object().ok_or_else(|| field_error(&record, "node1_pub"))?;
        // Some exports omit channel ids; fall back to the record position.
        let channel_id = string_field(obj, CHANNEL_ID, &record).unwrap_or_else(|_| format!("#{i}"));
        snapshot.channels.push(SnapshotChannel {
            channel_id,
            node1: string_field(obj, NODE1, &record)?.to_ascii_lowercase(),
            node2: string_field(obj, NODE2, &record)?.to_ascii_lowercase(),
            capacity_sat: capacity_field(obj, &record)?,
        });
    }
    Ok(snapshot)
}

/// Parses `u v capacity` lines. The capacity column may be omitted (capacity 1).
/// Nodes are listed in order of first appearance.
pub fn parse_edge_list(bytes: &[u8]) -> Result<Snapshot> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        offset: e.valid_up_to(),
        message: "invalid UTF-8".into(),
    })?;
    let mut snapshot = Snapshot::default();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let capacity_sat = match fields.as_slice() {
            [_, _] => 1,
            [_, _, cap] => cap.parse().map_err(|_| Error::Line {
                line,
                message: format!("capacity `{cap}` is not a non-negative integer"),
            })?,
            _ => {
                return Err(Error::Line {
                    line,
                    message: format!("expected `u v capacity`, found {} fields", fields.len()),
                })
            }
        };
        for endpoint in &fields[..2] {
            if seen.insert(endpoint.to_string()) {
                snapshot.nodes.push(SnapshotNode {
                    pub_key: endpoint.to_string(),
                    alias: None,
                });
            }
        }
        snapshot.channels.push(SnapshotChannel {
            channel_id: format!("L{line}"),
            node1: fields[0].to_string(),
            node2: fields[1].to_string(),
            capacity_sat,
        });
    }
    Ok(snapshot)
}

/// Serializes a graph as a snapshot document, one channel per collapsed edge.
pub fn to_snapshot_json(g: &Graph) -> String {
    let nodes: Vec<Value> = g
        .nodes()
        .iter()
        .map(|id| serde_json::json!({ "pub_key": id.as_str() }))
        .collect();
    let edges: Vec<Value> = g
        .edges()
        .enumerate()
        .map(|(i, e)| {
            serde_json::json!({
                "channel_id": i.to_string(),
                "node1_pub": e.u.as_str(),
                "node2_pub": e.v.as_str(),
                "capacity": e.capacity,
            })
        })
        .collect();
    let doc = serde_json::json!({ "nodes": nodes, "edges": edges });
    let mut out = serde_json::to_string_pretty(&doc).expect("json values serialize");
    out.push('\n');
    out
}

/// Serializes the collapsed edges as an edge list. Isolated nodes are not representable.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = String::from("# u v capacity\n");
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", e.u, e.v, e.capacity);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorKind {
    /// Preferential attachment seeded with a complete graph on `m + 1` nodes.
    BarabasiAlbert { n: usize, m: usize },
    /// Configuration model over a power-law degree sequence truncated to `[k_min, k_max]`.
    ConfigurationPowerlaw {
        n: usize,
        gamma: f64,
        k_min: usize,
        k_max: usize,
    },
    /// Node `0` joined to every other node.
    Star { n: usize },
    ErdosRenyi { n: usize, p: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub kind: GeneratorKind,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, seed: u64) -> Self {
        GeneratorSpec { kind, seed }
    }

    /// Parses `kind:key=value,...`, e.g. `ba:n=2000,m=2` or
    /// `config:n=10000,gamma=2.5,kmin=1,kmax=100`. A `seed=` key overrides `seed`.
    pub fn parse(text: &str, seed: u64) -> Result<Self> {
        let bad = |msg: String| Error::InvalidSpec(format!("{text}: {msg}"));
        let (kind, params) = text.split_once(':').unwrap_or((text, ""));
        let mut pairs = Vec::new();
        for item in params.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| bad(format!("`{item}` is not key=value")))?;
            pairs.push((k.trim().to_ascii_lowercase().replace('_', ""), v.trim().to_string()));
        }
        let get = |key: &str| pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        fn num<T: FromStr>(raw: Option<&str>, key: &str, fail: &dyn Fn(String) -> Error) -> Result<T> {
            let raw = raw.ok_or_else(|| fail(format!("missing `{key}`")))?;
            raw.parse().map_err(|_| fail(format!("`{key}={raw}` is not a valid number")))
        }
        let seed = match get("seed") {
            Some(_) => num(get("seed"), "seed", &bad)?,
            None => seed,
        };
        let kind = match kind.trim().to_ascii_lowercase().as_str() {
            "ba" | "barabasi_albert" | "barabasi-albert" => GeneratorKind::BarabasiAlbert {
                n: num(get("n"), "n", &bad)?,
                m: num(get("m"), "m", &bad)?,
            },
            "config" | "configuration" | "configuration_powerlaw" => GeneratorKind::ConfigurationPowerlaw {
                n: num(get("n"), "n", &bad)?,
                gamma: num(get("gamma"), "gamma", &bad)?,
                k_min: num(get("kmin"), "kmin", &bad)?,
                k_max: num(get("kmax"), "kmax", &bad)?,
            },
            "star" => GeneratorKind::Star {
                n: num(get("n"), "n", &bad)?,
            },
            "er" | "erdos_renyi" | "gnp" => GeneratorKind::ErdosRenyi {
                n: num(get("n"), "n", &bad)?,
                p: num(get("p"), "p", &bad)?,
            },
            other => return Err(bad(format!("unknown generator `{other}`"))),
        };
        let spec = GeneratorSpec { kind, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidSpec(msg.to_string()));
        match self.kind {
            GeneratorKind::BarabasiAlbert { n, m } => {
                if m < 1 || n < m + 1 {
                    return fail("barabasi_albert needs m >= 1 and n >= m + 1");
                }
            }
            GeneratorKind::ConfigurationPowerlaw { n, gamma, k_min, k_max } => {
                if !(gamma > 1.0) || k_min < 1 || k_min > k_max || k_max >= n {
                    return fail("configuration_powerlaw needs gamma > 1 and 1 <= k_min <= k_max < n");
                }
            }
            GeneratorKind::Star { n } => {
                if n < 1 {
                    return fail("star needs n >= 1");
                }
            }
            GeneratorKind::ErdosRenyi { n, p } => {
                if n < 1 || !(0.0..=1.0).contains(&p) {
                    return fail("erdos_renyi needs n >= 1 and 0 <= p <= 1");
                }
            }
        }
        Ok(())
    }
}

fn numbered(n: usize) -> Vec<NodeId> {
    (0..n).map(NodeId::from).collect()
}

fn unit_edges(pairs: Vec<(usize, usize)>) -> Vec<(NodeId, NodeId, u64)> {
    pairs
        .into_iter()
        .map(|(a, b)| (NodeId::from(a), NodeId::from(b), 1))
        .collect()
}

/// Builds the graph described by `spec`; a pure function of the spec.
/// Node ids are decimal indices and every edge has capacity 1.
pub fn generate(spec: &GeneratorSpec) -> Result<Graph> {
    spec.validate()?;
    let mut rng = rng::master(spec.seed);
    let (n, pairs) = match spec.kind {
        GeneratorKind::Star { n } => (n, (1..n).map(|i| (0, i)).collect()),
        GeneratorKind::ErdosRenyi { n, p } => {
            let mut pairs = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random::<f64>() < p {
                        pairs.push((i, j));
                    }
                }
            }
            (n, pairs)
        }
        GeneratorKind::BarabasiAlbert { n, m } => (n, barabasi_albert(n, m, &mut rng)),
        GeneratorKind::ConfigurationPowerlaw { n, gamma, k_min, k_max } => {
            (n, configuration_powerlaw(n, gamma, k_min, k_max, &mut rng))
        }
    };
    Graph::build(numbered(n), unit_edges(pairs))
}

fn barabasi_albert(n: usize, m: usize, rng: &mut rng::Rng) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(m * n);
    // Every edge endpoint once: sampling uniformly from it is degree-proportional.
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * m * n);
    for a in 0..=m {
        for b in a + 1..=m {
            pairs.push((a, b));
            endpoints.extend([a, b]);
        }
    }
    let mut targets = Vec::with_capacity(m);
    for v in m + 1..n {
        targets.clear();
        while targets.len() < m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            pairs.push((t, v));
            endpoints.extend([t, v]);
        }
    }
    pairs
}

/// Stub matching with self-loops and repeated pairs dropped, not rewired.
fn configuration_powerlaw(n: usize, gamma: f64, k_min: usize, k_max: usize, rng: &mut rng::Rng) -> Vec<(usize, usize)> {
    let mut cumulative = Vec::with_capacity(k_max - k_min + 1);
    let mut total = 0.0;
    for k in k_min..=k_max {
        total += (k as f64).powf(-gamma);
        cumulative.push(total);
    }
    let draw = |rng: &mut rng::Rng| {
        let u = rng.random::<f64>() * total;
        k_min + cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1)
    };
    let mut degrees: Vec<usize> = (0..n).map(|_| draw(rng)).collect();
    // Odd stub total: resample the last degree; if the support has one parity only, drop a stub.
    let mut attempts = 0;
    while degrees.iter().sum::<usize>() % 2 == 1 {
        if attempts < 1000 {
            degrees[n - 1] = draw(rng);
            attempts += 1;
        } else {
            degrees[n - 1] -= 1;
        }
    }
    let mut stubs: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat(v).take(d))
        .collect();
    stubs.shuffle(rng);
    let mut seen = HashSet::new();
    let mut pairs = Vec::with_capacity(stubs.len() / 2);
    for pair in stubs.chunks_exact(2) {
        let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
        if a != b && seen.insert((a, b)) {
            pairs.push((a, b));
        }
    }
    pairs
}

/// `n` i.i.d. draws from `P(k) ∝ k^-gamma`, `k >= k_min`.
pub fn sample_discrete_powerlaw(gamma: f64, k_min: u64, n: usize, seed: u64) -> Result<Vec<u64>> {
    let law = DiscretePowerLaw::new(gamma, k_min)?;
    let mut rng = rng::master(seed);
    Ok((0..n).map(|_| law.sample(&mut rng)).collect())
}
