//! Integral Fourier matrices, congruence multiplication tables, modular data and
//! quantum doubles of finite groups, all in exact arithmetic.

pub mod catalog;
pub mod congruence;
pub mod error;
pub mod exact;
pub mod fourier;
pub mod groups;
pub mod modular;
pub mod norms;
pub mod qdouble;

pub use error::{Error, Result};
pub use exact::{AlgebraicNumber, Cyclotomic, ExactNumber, Rational, RootChoice};

/// Crate version, part of every cache key.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
