//! Criterion benchmarks for the builders and queries live under `benches/`.
