//! Benchmarks for core operations.
