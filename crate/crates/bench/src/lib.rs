//! Criterion benchmarks for `fpbound`; see `benches/`.
