//! Inputs shared by the benchmarks.

use fourier_core::catalog::Catalog;
use fourier_core::fourier::IntegralFourierMatrix;

/// A catalog matrix by name; panics on unknown names.
pub fn matrix(name: &str) -> IntegralFourierMatrix {
    Catalog::builtin()
        .get(name)
        .unwrap_or_else(|e| panic!("{name}: {e}"))
}
