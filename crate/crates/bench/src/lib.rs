//! Fixtures shared by the benchmarks.

use rewire_lab::learning::{generate_patterns, init_weights, TrainingSet, WeightedNetwork};
use rewire_lab::topology::{build_layered_fnn, rewire};
use rewire_lab::{LayeredShape, RewiredGraph};

/// Network D (10 neurons x 10 layers) with `n_rewire` rewired edges.
pub fn network_d(n_rewire: usize) -> RewiredGraph {
    let base = build_layered_fnn(LayeredShape::new(10, 10).expect("valid shape"));
    rewire(&base, n_rewire, 7).expect("rewire within range")
}

pub fn trained_fixture(n_rewire: usize) -> (WeightedNetwork, TrainingSet) {
    let net = init_weights(network_d(n_rewire), 0.5, 11).expect("valid init range");
    let set = generate_patterns(10, 30, 13).expect("valid pattern set");
    (net, set)
}
