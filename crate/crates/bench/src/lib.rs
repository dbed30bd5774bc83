//! Criterion benchmarks for `sdf-core`. Run with `cargo bench -p sdf-bench`.
