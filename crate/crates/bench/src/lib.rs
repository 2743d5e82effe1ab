//! Criterion benchmarks for texent-core live in `benches/`.
