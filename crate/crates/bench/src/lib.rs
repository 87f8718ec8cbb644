//! Benchmark host crate; the measurements live in `benches/evaluators.rs`.
