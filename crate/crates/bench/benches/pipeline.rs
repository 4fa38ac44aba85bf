use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use plumbhf_core::families::sigma_2_3;
use plumbhf_core::fullpath::{basic_vectors, classify};
use plumbhf_core::kplus::{explore, hf_decomposition, ExplorationParams, KState};

fn bench_classify(c: &mut Criterion) {
    let family = sigma_2_3(6).unwrap();
    let start = family.basics[6].clone();
    c.bench_function("classify_k7_n6", |b| {
        b.iter(|| classify(black_box(&family.graph), black_box(&start)).unwrap())
    });
}

fn bench_basics(c: &mut Criterion) {
    let mut group = c.benchmark_group("basic_vectors");
    for n in [2usize, 4, 6] {
        let graph = sigma_2_3(n).unwrap().graph;
        group.bench_with_input(BenchmarkId::from_parameter(n), &graph, |b, g| {
            b.iter(|| basic_vectors(g).unwrap())
        });
    }
    group.finish();
}

fn bench_explore(c: &mut Criterion) {
    let family = sigma_2_3(4).unwrap();
    let form = family.graph.intersection_form().unwrap();
    let seeds: Vec<KState> = family
        .basics
        .iter()
        .map(|k| KState::new(1, k.clone()))
        .collect();
    let params = ExplorationParams::default();
    c.bench_function("explore_level1_n4", |b| {
        b.iter(|| explore(&family.graph, &form, black_box(&seeds), &params).unwrap())
    });
}

fn bench_hf(c: &mut Criterion) {
    let mut group = c.benchmark_group("hf_decomposition");
    group.sample_size(10);
    for n in [1usize, 3, 5] {
        let graph = sigma_2_3(n).unwrap().graph;
        group.bench_with_input(BenchmarkId::from_parameter(n), &graph, |b, g| {
            b.iter(|| hf_decomposition(g, &ExplorationParams::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_classify, bench_basics, bench_explore, bench_hf);
criterion_main!(benches);
