//! Sanity checking for temporal-logic requirements: consistency and
//! redundancy analysis over Büchi automata, vacuity witnesses, and
//! coverage-guided completeness suggestions.

pub mod automaton;
pub mod coverage;
pub mod error;
pub mod formula;
pub mod sanity;
pub mod scalar;
pub mod vacuity;

pub use error::{Error, Result};
pub use scalar::CoverageScalar;

/// Exact coverage values.
pub type ExactCoverage = num_rational::BigRational;
/// Floating-point coverage values.
pub type FloatCoverage = f64;
