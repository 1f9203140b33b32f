//! Criterion benchmarks for the GA engine live in `benches/`.
