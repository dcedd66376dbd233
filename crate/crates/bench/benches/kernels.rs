use std::hint::black_box;

use amo_bench::{centred_interval, supercritical};
use amo_core::experiments::box_eigenproblem;
use amo_core::green::{green_cramer_signed, green_direct};
use amo_core::interpolation::{g_function, max_ratio_over_z, sublevel_measure, theta_nodes, random_chebyshev_poly};
use amo_core::lyapunov::lyapunov_estimate;
use amo_core::operator::transfer_matrix_at;
use amo_core::GOLDEN_OMEGA;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn transfer(c: &mut Criterion) {
    let p = supercritical();
    let mut group = c.benchmark_group("transfer_matrix");
    for k in [256usize, 8192] {
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| transfer_matrix_at(&p, black_box(0.1), 0.3, k))
        });
    }
    group.finish();
}

fn lyapunov(c: &mut Criterion) {
    let p = supercritical();
    c.bench_function("lyapunov_k1024_grid64", |b| b.iter(|| lyapunov_estimate(&p, black_box(0.0), 1024, 64)));
}

fn green(c: &mut Criterion) {
    let p = supercritical();
    let i = centred_interval(200);
    c.bench_function("green_cramer_200", |b| b.iter(|| green_cramer_signed(&p, i, black_box(0.1), 0)));
    c.bench_function("green_direct_200", |b| b.iter(|| green_direct(&p, i, black_box(0.1))));
}

fn eigen(c: &mut Criterion) {
    let p = supercritical();
    let mut group = c.benchmark_group("box_eigenproblem");
    group.sample_size(10);
    group.bench_function("n500_window", |b| b.iter(|| box_eigenproblem(&p, 500, Some((-0.5, 0.5)))));
    group.finish();
}

fn interpolation(c: &mut Criterion) {
    let nodes = theta_nodes(0.3, GOLDEN_OMEGA, 200, 0, 500).unwrap();
    c.bench_function("interpolation_ratio_k200", |b| b.iter(|| max_ratio_over_z(&nodes, 0.0, 401)));
    c.bench_function("g_function", |b| b.iter(|| g_function(black_box(1.3))));
    let q = random_chebyshev_poly(100, 42, 0);
    c.bench_function("sublevel_measure_n100", |b| b.iter(|| sublevel_measure(&q, 0.5, 100, 10_000)));
}

criterion_group!(benches, transfer, lyapunov, green, eigen, interpolation);
criterion_main!(benches);
