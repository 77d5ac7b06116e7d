use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use partition_harmonics::{build_kernel, verify_leading_product};
use partition_harmonics_bench::KERNEL_ORDERS;

fn kernel_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_kernel");
    for s in KERNEL_ORDERS {
        group.bench_with_input(BenchmarkId::from_parameter(s), &s, |b, &s| {
            b.iter(|| build_kernel(black_box(s)).unwrap())
        });
    }
    group.finish();
}

fn leading_product(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_leading_product");
    for s in [8u32, 14, 20] {
        group.bench_with_input(BenchmarkId::from_parameter(s), &s, |b, &s| {
            b.iter(|| verify_leading_product(black_box(s)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, kernel_build, leading_product);
criterion_main!(benches);
