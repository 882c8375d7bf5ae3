//! Closed-form spectra vs the reference eigensolver and the power-iteration
//! oracle.

use std::hint::black_box;

use cesaro_core::oracle::{power_iteration_max, symmetric_eig_reference};
use cesaro_core::spectra::{min_kernel_eigensystem, min_kernel_matvec};
use cesaro_core::{make_matrix, MatrixKind};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn closed_min_kernel(c: &mut Criterion) {
    let mut group = c.benchmark_group("min_kernel_closed");
    group.sample_size(10);
    for n in [256usize, 1024, 2048] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| min_kernel_eigensystem(black_box(n)).unwrap())
        });
    }
    group.finish();
}

fn reference_eigensolver(c: &mut Criterion) {
    let mut group = c.benchmark_group("jacobi_reference");
    group.sample_size(10);
    for n in [64usize, 128, 256] {
        let m = make_matrix::<f64>(MatrixKind::Mmin, n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| symmetric_eig_reference(black_box(m), 1e-12, 60).unwrap())
        });
    }
    group.finish();
}

fn power_iteration(c: &mut Criterion) {
    let mut group = c.benchmark_group("power_iteration_kmax");
    group.sample_size(10);
    for n in [128usize, 512] {
        let k = make_matrix::<f64>(MatrixKind::Kmax, n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &k, |b, k| {
            b.iter(|| power_iteration_max(black_box(k), 1e-9, 1_000_000, 0).unwrap())
        });
    }
    group.finish();
}

fn matvec_closed_form(c: &mut Criterion) {
    let mut group = c.benchmark_group("min_kernel_matvec");
    for n in [1024usize, 8192] {
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &x, |b, x| {
            b.iter(|| min_kernel_matvec(black_box(x)))
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    closed_min_kernel,
    reference_eigensolver,
    power_iteration,
    matvec_closed_form
);
criterion_main!(benches);
