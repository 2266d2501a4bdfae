//! Benchmark-only crate; see `benches/sketch.rs`.
