use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use pathfactor::conditions::{check_condition_with, ConditionSpec, Mode};
use pathfactor::factor::build;
use pathfactor::generators::{generate, random_connected_graph, FamilySpec};
use pathfactor::matching::deficiency_oracle_with;
use pathfactor::par::map_items;
use pathfactor::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn exhaustive_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("exhaustive_condition");
    group.sample_size(10);
    let g = random_connected_graph(20, 0.2, 5);
    let spec = ConditionSpec::p2p9();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 20), &g, |b, g| {
            b.iter(|| check_condition_with(black_box(g), &spec, Mode::exhaustive(), exec).unwrap())
        });
    }
    group.finish();
}

fn deficiency(c: &mut Criterion) {
    let mut group = c.benchmark_group("deficiency_oracle");
    group.sample_size(10);
    let g = random_connected_graph(18, 0.15, 9);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 18), &g, |b, g| {
            b.iter(|| deficiency_oracle_with(black_box(g), exec).unwrap())
        });
    }
    group.finish();
}

fn sampled_sharp(c: &mut Criterion) {
    let mut group = c.benchmark_group("sampled_sharpness");
    group.sample_size(10);
    let h1 = generate(&FamilySpec::Sharp(1)).unwrap().graph;
    let spec = ConditionSpec::sharpness();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 100_000), &h1, |b, g| {
            b.iter(|| {
                check_condition_with(black_box(g), &spec, Mode::Sampled { trials: 100_000, seed: 1 }, exec).unwrap()
            })
        });
    }
    group.finish();
}

fn corpus_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("corpus_build");
    group.sample_size(10);
    let corpus: Vec<_> = (0..500u64)
        .map(|i| random_connected_graph(6 + (i % 5) as usize, 0.1 + 0.1 * (i % 6) as f64, i))
        .collect();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, corpus.len()), &corpus, |b, corpus| {
            b.iter(|| map_items(exec, black_box(corpus), |g| build(g, 4).unwrap().factor().is_some()))
        });
    }
    group.finish();
}

criterion_group!(benches, exhaustive_scan, deficiency, sampled_sharp, corpus_build);
criterion_main!(benches);
