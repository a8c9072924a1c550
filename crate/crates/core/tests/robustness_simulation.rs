use lntopo_core::ingest::{generate, GeneratorSpec};
use lntopo_core::robustness::{
    degree_extremes, molloy_reed_fc, percolate, reinforce_periphery, RemovalStrategy, StrategyKind,
};
use lntopo_core::Graph;

fn ba(n: usize, seed: u64) -> Graph {
    generate(&GeneratorSpec::parse(&format!("ba:n={n},m=2"), seed).unwrap()).unwrap()
}

fn f_c(g: &Graph, kind: StrategyKind, seed: u64, trials: usize) -> f64 {
    percolate(g, RemovalStrategy::new(kind, seed), trials, 0.005)
        .unwrap()
        .f_c
        .unwrap_or(1.0)
}

#[test]
fn random_failure_threshold_is_close_to_molloy_reed() {
    for (k, seed) in [(1, 0), (1, 1), (2, 0), (2, 1)] {
        let spec = GeneratorSpec::parse(&format!("config:n=10000,gamma=2.5,k_min={k},k_max=100"), seed).unwrap();
        let g = generate(&spec).unwrap();
        let (k_min, k_max) = degree_extremes(&g).unwrap();
        let analytic = molloy_reed_fc(2.5, k_min, k_max).unwrap();
        let simulated = f_c(&g, StrategyKind::Random, seed, 10);
        assert!(simulated - analytic <= 0.05, "k_min {k} seed {seed}: simulated {simulated} analytic {analytic}");
    }
}

#[test]
fn every_curve_starts_at_one_and_targeted_runs_repeat() {
    let g = ba(300, 4);
    for kind in StrategyKind::ALL {
        let a = percolate(&g, RemovalStrategy::new(kind, 9), 5, 0.01).unwrap();
        assert_eq!(a.curve[0].giant_fraction, 1.0);
        assert_eq!(a.curve[0].fraction_removed, 0.0);
        if kind.is_deterministic() {
            assert_eq!(a, percolate(&g, RemovalStrategy::new(kind, 9), 5, 0.01).unwrap());
        }
    }
}

#[test]
fn betweenness_attack_is_at_least_as_strong_as_degree_attack() {
    let mut hbr = Vec::new();
    let mut hdr = Vec::new();
    for seed in 0..5 {
        let g = ba(500, seed);
        hbr.push(f_c(&g, StrategyKind::HighBetweenness, seed, 1));
        hdr.push(f_c(&g, StrategyKind::HighDegree, seed, 1));
    }
    let median = |v: &mut Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v[v.len() / 2]
    };
    let (b, d) = (median(&mut hbr), median(&mut hdr));
    assert!(b <= d, "HBR {b} HDR {d}");
}

#[test]
fn periphery_reinforcement_delays_degree_attack() {
    let mut improved = 0;
    for seed in 0..20 {
        let g = ba(2000, seed);
        let extra = g.edge_count() / 20;
        let reinforced = reinforce_periphery(&g, 2, extra, seed).unwrap();
        let before = f_c(&g, StrategyKind::HighDegree, seed, 1);
        let after = f_c(&reinforced, StrategyKind::HighDegree, seed, 1);
        if after > before {
            improved += 1;
        }
    }
    assert!(improved >= 16, "{improved}/20");
}
