//! Khovanov homology of tangles through oriented smoothings and dotted
//! cobordisms, with tools for checking diagonality of reduced complexes.

pub mod cli;
pub mod cobcore;
pub mod complex;
pub mod diagonal;
pub mod error;
pub mod homology;
pub mod planar;
pub mod ring;
pub mod tangle;
pub mod testing;

pub use error::{Error, Result};
pub use ring::{GroundRing, Ring};

/// Integer coefficients.
pub type Z = num_bigint::BigInt;
/// Rational coefficients.
pub type Q = num_rational::BigRational;
