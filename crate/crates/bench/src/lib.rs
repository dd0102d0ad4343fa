//! Benchmarks for modtrace-core live under `benches/`.
