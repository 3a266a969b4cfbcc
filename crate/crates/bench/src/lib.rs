//! Criterion benchmarks for the swallowtail crates; see `benches/`.
