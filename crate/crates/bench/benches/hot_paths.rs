use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rewire_lab::metrics::{global_efficiency, local_efficiency};
use rewire_lab::topology::{build_layered_fnn, rewire};
use rewire_lab::{LayeredShape, SubgraphDefinition};
use rewire_lab_bench::{network_d, trained_fixture};

fn efficiency(c: &mut Criterion) {
    let mut group = c.benchmark_group("efficiency/network_d");
    for k in [0, 100, 750] {
        let g = network_d(k);
        group.bench_with_input(BenchmarkId::new("global", k), &g, |b, g| b.iter(|| global_efficiency(black_box(g))));
        for def in SubgraphDefinition::ALL {
            group.bench_with_input(BenchmarkId::new(format!("local_{def}"), k), &g, |b, g| {
                b.iter(|| local_efficiency(black_box(g), def))
            });
        }
    }
    group.finish();
}

fn rewiring(c: &mut Criterion) {
    let base = build_layered_fnn(LayeredShape::new(10, 10).unwrap());
    let mut group = c.benchmark_group("rewire/network_d");
    for k in [10, 400, 900] {
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            let mut seed = 0u64;
            b.iter(|| {
                seed += 1;
                rewire(&base, k, seed).unwrap()
            })
        });
    }
    group.finish();
}

fn backprop(c: &mut Criterion) {
    let mut group = c.benchmark_group("backprop_step/network_d");
    for k in [0, 750] {
        let (net, set) = trained_fixture(k);
        group.bench_function(BenchmarkId::from_parameter(k), |b| {
            let mut net = net.clone();
            let mut i = 0;
            b.iter(|| {
                i += 1;
                net.backprop_step(&set.patterns()[i % set.len()], 0.02)
            })
        });
    }
    group.finish();
}

criterion_group!(benches, efficiency, rewiring, backprop);
criterion_main!(benches);
