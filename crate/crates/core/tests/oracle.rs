//! Efficiency and rewiring checked against brute-force oracles.

use proptest::prelude::*;
use rewire_lab::metrics::{
    distance_matrix, global_efficiency, local_efficiency, neighborhood_subgraph, subgraph_efficiency,
    SubgraphDefinition,
};
use rewire_lab::topology::{build_layered_fnn, rewire, Edge, LayeredShape, RewiredGraph};
use rewire_lab_testkit::floyd::{
    efficiency as floyd_efficiency, global_efficiency as graph_oracle, subgraph_efficiency as subgraph_oracle,
};

#[test]
fn oracle_reproduces_hand_values() {
    assert!((floyd_efficiency(3, &[(0, 1), (1, 2)]) - 5.0 / 6.0).abs() < 1e-15);
    let g = build_layered_fnn(LayeredShape::new(5, 5).unwrap());
    let center = g.shape().flat_id(rewire_lab::NodeRef::new(2, 0));
    let oracle = subgraph_oracle(&g, center, SubgraphDefinition::SameLayerAugmented);
    assert!((oracle - 131.0 / 182.0).abs() < 1e-15);
}

#[test]
fn augmented_baseline_local_efficiency_matches_oracle() {
    let g = build_layered_fnn(LayeredShape::new(5, 5).unwrap());
    let oracle: f64 = (0..25)
        .map(|c| subgraph_oracle(&g, c, SubgraphDefinition::SameLayerAugmented))
        .sum::<f64>()
        / 25.0;
    assert!(oracle > 0.0);
    let got = local_efficiency(&g, SubgraphDefinition::SameLayerAugmented);
    assert!((got - oracle).abs() < 1e-12, "{got} vs {oracle}");
}

fn small_rewired() -> impl Strategy<Value = RewiredGraph> {
    (1usize..=5, 2usize..=6, any::<u64>(), 0.0f64..=1.0).prop_filter_map(
        "at most 30 nodes",
        |(n, l, seed, frac)| {
            let shape = LayeredShape::new(n, l).ok()?;
            if shape.node_count() > 30 {
                return None;
            }
            let base = build_layered_fnn(shape);
            let k = (frac * base.edges().len() as f64).round() as usize;
            rewire(&base, k, seed).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn efficiencies_match_floyd_oracle(g in small_rewired()) {
        let e = global_efficiency(&g);
        prop_assert!((e - graph_oracle(&g)).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&e));
        for def in SubgraphDefinition::ALL {
            for node in g.shape().nodes() {
                let sub = neighborhood_subgraph(&g, node, def);
                let got = subgraph_efficiency(&sub);
                let want = subgraph_oracle(&g, g.shape().flat_id(node), def);
                prop_assert!((got - want).abs() < 1e-12, "{node} {def}: {got} vs {want}");
            }
            let local = local_efficiency(&g, def);
            prop_assert!((0.0..=1.0).contains(&local));
        }
    }

    #[test]
    fn corrected_neighborhood_is_contained_in_augmented(g in small_rewired()) {
        for node in g.shape().nodes() {
            let c = neighborhood_subgraph(&g, node, SubgraphDefinition::Corrected);
            let a = neighborhood_subgraph(&g, node, SubgraphDefinition::SameLayerAugmented);
            prop_assert!(!c.nodes.contains(&node) && !a.nodes.contains(&node));
            prop_assert!(c.nodes.iter().all(|v| a.nodes.contains(v)));
            prop_assert!(c.edges.iter().all(|e| a.edges.contains(e)));
            for (u, v) in &a.edges {
                prop_assert!(g.contains_edge(&Edge::new(*u, *v)) || g.contains_edge(&Edge::new(*v, *u)));
            }
        }
    }

    #[test]
    fn adding_an_edge_never_lowers_global_efficiency(
        n in 2usize..12,
        raw in proptest::collection::vec((0usize..12, 0usize..12), 0..20),
        extra in (0usize..12, 0usize..12),
    ) {
        let edges: Vec<(usize, usize)> = raw.into_iter().map(|(a, b)| (a % n, b % n)).collect();
        let before = distance_matrix(n, &edges).efficiency();
        let mut more = edges.clone();
        more.push((extra.0 % n, extra.1 % n));
        let after = distance_matrix(n, &more).efficiency();
        prop_assert!(after >= before);
        prop_assert!((before - floyd_efficiency(n, &edges)).abs() < 1e-12);
    }

    #[test]
    fn rewiring_invariants(n in 1usize..=6, l in 2usize..=6, seed: u64, frac in 0.0f64..=1.0) {
        let base = build_layered_fnn(LayeredShape::new(n, l).unwrap());
        let m = base.edges().len();
        let k = (frac * m as f64).floor() as usize;
        match rewire(&base, k, seed) {
            Ok(g) => {
                prop_assert_eq!(g.edges().len(), m);
                prop_assert!(g.validate().is_empty());
                let kept = g.edges().iter().filter(|e| base.contains_edge(e)).count();
                prop_assert_eq!(m - kept, k);
                prop_assert!(g.edges().iter().all(|e| e.is_forward()));
                prop_assert_eq!(rewire(&base, k, seed).unwrap(), g);
            }
            // saturation is only legitimate when the unused forward pairs run out
            Err(rewire_lab::Error::Saturated { .. }) => {
                let nodes = n * l;
                let forward_pairs = nodes * (nodes - 1) / 2 - l * n * (n - 1) / 2;
                prop_assert!(forward_pairs - m < k);
            }
            Err(e) => prop_assert!(false, "unexpected error {}", e),
        }
    }
}
