//! Benchmark-only crate; the measurements live under `benches/`.
//! Shared fixtures for the benchmark targets are defined here.

use teneig_core::tensor::{random_tensor, Tensor};

/// Deterministic dense tensor used across benchmark targets.
pub fn fixture(order: usize, dim: usize) -> Tensor {
    random_tensor(order, dim, 0xBE7C, false)
}
