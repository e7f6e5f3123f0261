//! Benchmark harness; see `benches/`.
