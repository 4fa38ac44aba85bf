//! Benchmarks for the plumbing pipeline live in `benches/`.
