use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use injres::{minimal_resolution, order_complex_resolution};
use injres_bench::skeleton_constant;

fn minimal_skeleta(c: &mut Criterion) {
    let mut group = c.benchmark_group("minimal/skeleton_k3");
    group.sample_size(10);
    for n in [5, 6, 7] {
        let sheaf = skeleton_constant(n, 3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &sheaf, |b, s| {
            b.iter(|| minimal_resolution(black_box(s), None).unwrap())
        });
    }
    group.finish();
}

fn order_complex_skeleta(c: &mut Criterion) {
    let mut group = c.benchmark_group("order_complex/skeleton_k2");
    group.sample_size(10);
    for n in [3, 4, 5] {
        let sheaf = skeleton_constant(n, 2);
        group.bench_with_input(BenchmarkId::from_parameter(n), &sheaf, |b, s| {
            b.iter(|| order_complex_resolution(black_box(s)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, minimal_skeleta, order_complex_skeleta);
criterion_main!(benches);
