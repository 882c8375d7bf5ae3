//! Criterion benchmark harness; the actual benchmarks live in `benches/`.
