//! Criterion benchmarks for `diotuple-core`; see `benches/`.
