//! Criterion benchmarks of the ABP pipeline stages; see `benches/`.
