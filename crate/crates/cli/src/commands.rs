use std::fs;
use std::path::Path;

use lntopo_core::format::{sig6, sig6_opt};
use lntopo_core::ingest::{self, GeneratorSpec};
use lntopo_core::metrics::summarize as summary_report;
use lntopo_core::powerlaw::{degree_ccdf, degree_samples, gof_pvalue, select_kmin};
use lntopo_core::robustness::{
    degree_extremes, hub_removal_cumulative, hub_removal_single, molloy_reed_fc, percolate as run_percolation,
    reinforce_periphery, threshold_size, PercolationResult, RemovalStrategy, StrategyKind,
};
use lntopo_core::Graph;
use serde::Serialize;

use crate::output::{self, Csv};
use crate::{
    AttackArgs, AttackMode, Common, FitArgs, Format, GenerateArgs, InputFormat, PercolateArgs, PercolationArgs,
    ReinforceArgs, SummarizeArgs,
};
use crate::Failure;

struct Input {
    graph: Graph,
    /// Channels before parallel ones were collapsed.
    raw_channels: usize,
}

fn load(common: &Common) -> Result<Input, Failure> {
    if let Some(spec) = &common.generate {
        let graph = ingest::generate(&GeneratorSpec::parse(spec, common.seed)?)?;
        let raw_channels = graph.edge_count();
        return Ok(Input { graph, raw_channels });
    }
    let path = common.input.as_ref().expect("clap requires an input");
    let bytes = fs::read(path).map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
    let snapshot = match common.input_format {
        InputFormat::Snapshot => ingest::parse_snapshot(&bytes)?,
        InputFormat::Edgelist => ingest::parse_edge_list(&bytes)?,
        InputFormat::Auto if looks_like_json(path, &bytes) => ingest::parse_snapshot(&bytes)?,
        InputFormat::Auto => ingest::parse_edge_list(&bytes)?,
    };
    Ok(Input {
        graph: snapshot.to_graph()?,
        raw_channels: snapshot.channels.len(),
    })
}

fn looks_like_json(path: &Path, bytes: &[u8]) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
        || bytes.iter().find(|b| !b.is_ascii_whitespace()) == Some(&b'{')
}

fn render(format: Format, json: String, rows: &[(String, String)]) -> String {
    match format {
        Format::Json => json,
        Format::Csv => output::key_values_csv(rows),
        Format::Table => output::key_values(rows),
    }
}

pub fn summarize(args: &SummarizeArgs) -> Result<(), Failure> {
    let c = &args.common;
    let input = load(c)?;
    let report = summary_report(&input.graph, input.raw_channels, c.seed);
    let rows: Vec<(String, String)> = report.rows().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    let (name, text) = match c.format {
        Format::Json => ("summary.json", output::json(&report)),
        Format::Csv => ("summary.csv", output::key_values_csv(&rows)),
        Format::Table => ("summary.txt", report.to_table()),
    };
    output::write(&c.out, name, &text)?;
    print!("{text}");
    Ok(())
}

#[derive(Serialize)]
struct FitReport {
    node_count: usize,
    /// Isolated nodes, excluded from the fit.
    zero_degree_nodes: usize,
    gamma: f64,
    k_min: u64,
    n_tail: usize,
    n_total: usize,
    ks_statistic: f64,
    log_likelihood: f64,
    distinct_values: usize,
    low_confidence: bool,
    p_value: Option<f64>,
    bootstrap_count: usize,
    precision: Option<f64>,
    seed: u64,
}

pub fn fit(args: &FitArgs) -> Result<(), Failure> {
    let c = &args.common;
    let g = load(c)?.graph;

    let mut ccdf = Csv::new(&["k", "count", "ccdf"]);
    for row in degree_ccdf(&g) {
        ccdf.row([row.k.to_string(), row.count.to_string(), sig6(row.ccdf)]);
    }
    output::write(&c.out, "degree_ccdf.csv", &ccdf.finish())?;

    let samples = degree_samples(&g);
    let mut distinct = samples.degrees.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() <= 2 {
        return Err(Failure::new(
            Failure::DEGENERATE,
            format!(
                "degenerate degree sequence: {} distinct positive degree value(s), a power-law fit is meaningless",
                distinct.len()
            ),
        ));
    }
    let fitted = select_kmin(&samples.degrees)?;
    let gof = match args.bootstraps {
        0 => None,
        b => Some(gof_pvalue(&samples.degrees, &fitted, b, c.seed)?),
    };
    let report = FitReport {
        node_count: g.node_count(),
        zero_degree_nodes: samples.zero_degree,
        gamma: fitted.gamma,
        k_min: fitted.k_min,
        n_tail: fitted.n_tail,
        n_total: fitted.n_total,
        ks_statistic: fitted.ks_statistic,
        log_likelihood: fitted.log_likelihood,
        distinct_values: fitted.distinct_values,
        low_confidence: fitted.low_confidence,
        p_value: gof.map(|r| r.p_value),
        bootstrap_count: args.bootstraps,
        precision: gof.map(|r| r.precision),
        seed: c.seed,
    };
    let json = output::json(&report);
    output::write(&c.out, "fit.json", &json)?;
    let rows = vec![
        ("gamma".to_string(), sig6(report.gamma)),
        ("k_min".to_string(), report.k_min.to_string()),
        ("n_tail".to_string(), report.n_tail.to_string()),
        ("n_total".to_string(), report.n_total.to_string()),
        ("ks_statistic".to_string(), sig6(report.ks_statistic)),
        ("p_value".to_string(), sig6_opt(report.p_value)),
        ("precision".to_string(), sig6_opt(report.precision)),
        ("low_confidence".to_string(), report.low_confidence.to_string()),
    ];
    print!("{}", render(c.format, json, &rows));
    Ok(())
}

fn strategies(args: &PercolationArgs) -> Result<Vec<StrategyKind>, Failure> {
    let mut kinds = Vec::new();
    for s in &args.strategies {
        let kind: StrategyKind = s.trim().parse()?;
        if !kinds.contains(&kind) {
            kinds.push(kind);
        }
    }
    if kinds.is_empty() {
        return Err(Failure::config("no removal strategy selected"));
    }
    Ok(kinds)
}

fn run_all(g: &Graph, kinds: &[StrategyKind], args: &PercolationArgs, seed: u64) -> Result<Vec<PercolationResult>, Failure> {
    kinds
        .iter()
        .map(|&k| Ok(run_percolation(g, RemovalStrategy::new(k, seed), args.trials, args.step)?))
        .collect()
}

#[derive(Serialize)]
struct Threshold {
    strategy: StrategyKind,
    trials: usize,
    f_c: Option<f64>,
}

impl Threshold {
    fn of(r: &PercolationResult) -> Threshold {
        Threshold {
            strategy: r.strategy.kind,
            trials: r.trials,
            f_c: r.f_c,
        }
    }
}

#[derive(Serialize)]
struct MolloyReed {
    gamma: f64,
    k_min: u64,
    k_max: u64,
    f_c: f64,
}

/// Analytic random-failure threshold from the fitted exponent and the degree
/// extremes, when the exponent lies in its range of validity.
fn molloy_reed(g: &Graph) -> Option<MolloyReed> {
    let gamma = select_kmin(&degree_samples(g).degrees).ok()?.gamma;
    let (k_min, k_max) = degree_extremes(g)?;
    let f_c = molloy_reed_fc(gamma, k_min, k_max).ok()?;
    Some(MolloyReed { gamma, k_min, k_max, f_c })
}

#[derive(Serialize)]
struct ThresholdReport {
    node_count: usize,
    threshold_size: f64,
    step: f64,
    seed: u64,
    strategies: Vec<Threshold>,
    molloy_reed: Option<MolloyReed>,
}

fn threshold_rows(results: &[Threshold]) -> Vec<(String, String)> {
    results
        .iter()
        .map(|t| (format!("f_c {}", t.strategy), t.f_c.map(sig6).unwrap_or_else(|| "not reached".into())))
        .collect()
}

pub fn percolate(args: &PercolateArgs) -> Result<(), Failure> {
    let c = &args.common;
    let p = &args.percolation;
    let g = load(c)?.graph;
    let results = run_all(&g, &strategies(p)?, p, c.seed)?;
    for r in &results {
        let mut csv = Csv::new(&["fraction_removed", "giant_fraction"]);
        for point in &r.curve {
            csv.row([sig6(point.fraction_removed), sig6(point.giant_fraction)]);
        }
        let name = format!("percolation_{}.csv", r.strategy.kind.code().to_ascii_lowercase());
        output::write(&c.out, &name, &csv.finish())?;
    }
    let report = ThresholdReport {
        node_count: g.node_count(),
        threshold_size: threshold_size(g.node_count()),
        step: p.step,
        seed: c.seed,
        strategies: results.iter().map(Threshold::of).collect(),
        molloy_reed: molloy_reed(&g),
    };
    let json = output::json(&report);
    output::write(&c.out, "thresholds.json", &json)?;
    let mut rows = threshold_rows(&report.strategies);
    if let Some(mr) = &report.molloy_reed {
        rows.push(("f_c Molloy-Reed".into(), sig6(mr.f_c)));
    }
    print!("{}", render(c.format, json, &rows));
    Ok(())
}

pub fn attack(args: &AttackArgs) -> Result<(), Failure> {
    let c = &args.common;
    let g = load(c)?.graph;
    let (csv, rows) = match args.mode {
        AttackMode::Cumulative => {
            let report = hub_removal_cumulative(&g, args.top_k)?;
            let mut csv = Csv::new(&[
                "step",
                "node",
                "degree",
                "component_count",
                "giant_size",
                "remaining_capacity_sat",
                "remaining_capacity_fraction",
                "mean_shortest_path",
            ]);
            let s = &report.initial;
            csv.row([
                "0".into(),
                String::new(),
                String::new(),
                s.component_count.to_string(),
                s.giant_size.to_string(),
                s.remaining_capacity_sat.to_string(),
                sig6(s.remaining_capacity_fraction),
                sig6_opt(s.mean_shortest_path),
            ]);
            for step in &report.steps {
                let s = &step.state;
                csv.row([
                    step.step.to_string(),
                    step.removed.to_string(),
                    step.degree.to_string(),
                    s.component_count.to_string(),
                    s.giant_size.to_string(),
                    s.remaining_capacity_sat.to_string(),
                    sig6(s.remaining_capacity_fraction),
                    sig6_opt(s.mean_shortest_path),
                ]);
            }
            let last = report.steps.last().map_or(&report.initial, |s| &s.state);
            let rows = vec![
                ("removed".to_string(), report.steps.len().to_string()),
                ("component_count".to_string(), last.component_count.to_string()),
                ("giant_size".to_string(), last.giant_size.to_string()),
                ("remaining_capacity_fraction".to_string(), sig6(last.remaining_capacity_fraction)),
                ("mean_shortest_path".to_string(), sig6_opt(last.mean_shortest_path)),
            ];
            (csv, rows)
        }
        AttackMode::Single => {
            let removals = hub_removal_single(&g, args.top_k)?;
            let mut csv = Csv::new(&["rank", "node", "degree", "component_count"]);
            for (i, r) in removals.iter().enumerate() {
                csv.row([(i + 1).to_string(), r.node.to_string(), r.degree.to_string(), r.component_count.to_string()]);
            }
            let splitting = removals.iter().filter(|r| r.component_count > 1).count();
            let rows = vec![
                ("hubs".to_string(), removals.len().to_string()),
                ("hubs leaving several components".to_string(), splitting.to_string()),
            ];
            (csv, rows)
        }
    };
    let text = csv.finish();
    output::write(&c.out, "attack.csv", &text)?;
    match c.format {
        Format::Csv => print!("{text}"),
        Format::Table => print!("{}", output::key_values(&rows)),
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> =
                rows.into_iter().map(|(k, v)| (k, serde_json::Value::String(v))).collect();
            print!("{}", output::json(&map));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ReinforceReport {
    degree_threshold: usize,
    new_edges: usize,
    edge_count_before: usize,
    edge_count_after: usize,
    seed: u64,
    before: Vec<Threshold>,
    after: Vec<Threshold>,
}

pub fn reinforce(args: &ReinforceArgs) -> Result<(), Failure> {
    let c = &args.common;
    let p = &args.percolation;
    let g = load(c)?.graph;
    let new_edges = args
        .new_edges
        .unwrap_or_else(|| (g.edge_count() as f64 * 0.05).round() as usize);
    let reinforced = reinforce_periphery(&g, args.degree_threshold, new_edges, c.seed)?;
    let kinds = strategies(p)?;
    let report = ReinforceReport {
        degree_threshold: args.degree_threshold,
        new_edges,
        edge_count_before: g.edge_count(),
        edge_count_after: reinforced.edge_count(),
        seed: c.seed,
        before: run_all(&g, &kinds, p, c.seed)?.iter().map(Threshold::of).collect(),
        after: run_all(&reinforced, &kinds, p, c.seed)?.iter().map(Threshold::of).collect(),
    };
    let json = output::json(&report);
    output::write(&c.out, "reinforce.json", &json)?;
    let mut rows = vec![("new_edges".to_string(), new_edges.to_string())];
    for (label, list) in [("before", &report.before), ("after", &report.after)] {
        rows.extend(threshold_rows(list).into_iter().map(|(k, v)| (format!("{k} {label}"), v)));
    }
    print!("{}", render(c.format, json, &rows));
    Ok(())
}

pub fn generate(args: &GenerateArgs) -> Result<(), Failure> {
    let c = &args.common;
    if c.generate.is_none() {
        return Err(Failure::config("generate needs --generate SPEC"));
    }
    let g = load(c)?.graph;
    output::write(&c.out, "graph.json", &ingest::to_snapshot_json(&g))?;
    output::write(&c.out, "edges.txt", &ingest::to_edge_list(&g))?;
    let rows = vec![
        ("nodes".to_string(), g.node_count().to_string()),
        ("edges".to_string(), g.edge_count().to_string()),
    ];
    let json = output::json(&serde_json::json!({ "nodes": g.node_count(), "edges": g.edge_count() }));
    print!("{}", render(c.format, json, &rows));
    Ok(())
}
