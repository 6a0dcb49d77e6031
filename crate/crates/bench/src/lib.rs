//! Criterion benchmarks for qdephase; see `benches/`.
