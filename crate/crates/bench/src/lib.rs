//! Criterion benchmarks for skeinlab; see `benches/engine.rs`.
