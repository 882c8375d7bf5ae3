//! Exact rational linear algebra: the structured constructors and the dense
//! primitives they feed.

use std::hint::black_box;

use cesaro_core::spectra::diagonalize;
use cesaro_core::{make_matrix, ExactScalar, MatrixKind};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn exact_invert(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_invert");
    group.sample_size(10);
    for n in [8usize, 16, 32] {
        let p = make_matrix::<ExactScalar>(MatrixKind::P, n).unwrap();
        group.bench_with_input(BenchmarkId::new("P", n), &p, |b, p| {
            b.iter(|| black_box(p).invert().unwrap())
        });
        let m = make_matrix::<ExactScalar>(MatrixKind::Mmin, n).unwrap();
        group.bench_with_input(BenchmarkId::new("Mmin", n), &m, |b, m| {
            b.iter(|| black_box(m).invert().unwrap())
        });
    }
    group.finish();
}

fn exact_matmul(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_matmul");
    group.sample_size(10);
    for n in [16usize, 32] {
        let s = make_matrix::<ExactScalar>(MatrixKind::S, n).unwrap();
        let v = make_matrix::<ExactScalar>(MatrixKind::V, n).unwrap();
        group.bench_with_input(BenchmarkId::new("S*V", n), &(s, v), |b, (s, v)| {
            b.iter(|| black_box(s).matmul(black_box(v)).unwrap())
        });
    }
    group.finish();
}

fn exact_diagonalize(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_diagonalize");
    group.sample_size(10);
    for n in [8usize, 16] {
        group.bench_with_input(BenchmarkId::new("P", n), &n, |b, &n| {
            b.iter(|| diagonalize::<ExactScalar>(MatrixKind::P, black_box(n)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, exact_invert, exact_matmul, exact_diagonalize);
criterion_main!(benches);
