pub mod arith;
pub mod brandt;
pub mod cli;
pub mod equidist;
mod error;
pub mod modforms;
pub mod modpoly;
pub mod ssgraph;
pub mod velu;

pub use error::{Error, Result};

/// Exact rational numbers used for divisors, measures and residuals.
pub type Rational = num_rational::Ratio<i128>;
