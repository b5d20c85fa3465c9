//! Benchmark harness for hurwitz-core; see benches/.
