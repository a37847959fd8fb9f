use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use drhodge::givental::{feynman_sum, Perturb};
use drhodge::par::Mode;
use drhodge::relations::{build_lambda_product, certify};
use drhodge::Engine;
use std::hint::black_box;

// A fresh engine per iteration so the memo tables start empty.
fn modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("engine");
    group.sample_size(10);
    for mode in [Mode::Sequential, Mode::Parallel] {
        let label = format!("{mode:?}");
        group.bench_with_input(BenchmarkId::new("lambda_class(3,0)", &label), &mode, |b, &m| {
            b.iter(|| black_box(Engine::with_mode(m).lambda_class(3, 0).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("certify lambda_product(4)", &label), &mode, |b, &m| {
            let rel = build_lambda_product(4).unwrap();
            b.iter(|| black_box(certify(&Engine::with_mode(m), &rel).unwrap().pass))
        });
        group.bench_with_input(BenchmarkId::new("feynman_sum(2,4,[2])", &label), &mode, |b, &m| {
            b.iter(|| black_box(feynman_sum(&Engine::with_mode(m), 2, 4, &[2], 3, Perturb::default()).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, modes);
criterion_main!(benches);
