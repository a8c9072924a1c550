#[path = "support/oracle.rs"]
mod oracle;

use lntopo_core::metrics::{betweenness, density, closeness, clustering_scores, maximal_independent_set, transitivity};
use oracle::{random_graph, Dense};

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

fn check(n: usize, p: f64, seed: u64) {
    let g = random_graph(n, p, seed);
    let o = Dense::new(&g);
    let ctx = format!("n={n} p={p} seed={seed}");

    let bc = betweenness(&g);
    let cl = closeness(&g);
    let lc = clustering_scores(&g);
    for (i, ((b, c), l)) in o.betweenness().into_iter().zip(o.closeness()).zip(o.local_clustering()).enumerate() {
        let id = &o.ids[i];
        assert!(close(bc.get(id).unwrap(), b), "betweenness {id} {ctx}");
        assert!(close(cl.get(id).unwrap(), c), "closeness {id} {ctx}");
        assert!(close(lc.get(id).unwrap(), l), "clustering {id} {ctx}");
    }

    match (transitivity(&g).ok(), o.transitivity()) {
        (Some(a), Some(b)) => assert!(close(a, b), "transitivity {ctx}"),
        (a, b) => assert_eq!(a.is_some(), b.is_some(), "transitivity definedness {ctx}"),
    }

    let mut bridges: Vec<_> = g.bridges().into_iter().map(|e| (e.u, e.v)).collect();
    bridges.sort();
    assert_eq!(bridges, o.bridges(), "bridges {ctx}");
    assert_eq!(g.connected_components(), o.components(), "components {ctx}");

    match (g.distance_summary().ok(), o.distance_summary()) {
        (Some(s), Some((diameter, radius, mean))) => {
            assert_eq!(s.diameter, diameter, "diameter {ctx}");
            assert_eq!(s.radius, radius, "radius {ctx}");
            assert!(close(s.mean_shortest_path, mean), "mean path {ctx}");
        }
        (a, b) => assert_eq!(a.is_some(), b.is_some(), "distance definedness {ctx}"),
    }

    match (density(&g).ok(), o.density()) {
        (Some(a), Some(b)) => assert!(close(a, b), "density {ctx}"),
        (a, b) => assert_eq!(a.is_some(), b.is_some(), "density definedness {ctx}"),
    }
    assert!(o.is_maximal_independent(&maximal_independent_set(&g, seed)), "independent set {ctx}");
}

#[test]
fn matches_brute_force_on_random_graphs() {
    let ps = [0.1, 0.3, 0.6];
    for k in 0..200u64 {
        let n = 1 + (k as usize * 7) % 30;
        check(n, ps[k as usize % 3], k);
    }
}

#[test]
fn matches_brute_force_on_sparse_forests() {
    // Low p gives many trees and isolated nodes, where bridges and leaves dominate.
    for k in 0..40u64 {
        check(5 + (k as usize % 25), 0.05, 1000 + k);
    }
}
