//! Exact scalar rings used as coefficients.
//!
//! Everything in the crate is generic over [`Ring`]; the two concrete rings
//! are arbitrary-precision integers ([`crate::Z`]) and rationals
//! ([`crate::Q`]).

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A commutative ring with exact arithmetic and a Euclidean structure
/// (enough for Smith normal form).
pub trait Ring:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Short name used in serialized output (`"z"` or `"q"`).
    const NAME: &'static str;

    fn from_i64(n: i64) -> Self;

    /// Multiplicative inverse, if `self` is a unit.
    fn inverse(&self) -> Option<Self>;

    fn is_unit(&self) -> bool {
        self.inverse().is_some()
    }

    /// Euclidean norm; zero exactly for zero.
    fn norm(&self) -> BigUint;

    /// Euclidean division `self = q * d + r` with `norm(r) < norm(d)`.
    fn div_rem_euclid(&self, d: &Self) -> (Self, Self);

    /// Canonical associate-normalization factor: a unit `u` such that `u * self`
    /// is the preferred representative (nonnegative for integers).
    fn normalizing_unit(&self) -> Self;

    fn parse_exact(s: &str) -> Option<Self>;
}

impl Ring for BigInt {
    const NAME: &'static str = "z";

    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_one() || (-self).is_one() {
            Some(self.clone())
        } else {
            None
        }
    }

    fn norm(&self) -> BigUint {
        self.magnitude().clone()
    }

    fn div_rem_euclid(&self, d: &Self) -> (Self, Self) {
        self.div_mod_floor(d)
    }

    fn normalizing_unit(&self) -> Self {
        if self.sign() == Sign::Minus {
            -BigInt::one()
        } else {
            BigInt::one()
        }
    }

    fn parse_exact(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}

impl Ring for BigRational {
    const NAME: &'static str = "q";

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn norm(&self) -> BigUint {
        if self.is_zero() {
            BigUint::zero()
        } else {
            BigUint::one()
        }
    }

    fn div_rem_euclid(&self, d: &Self) -> (Self, Self) {
        (self / d, BigRational::zero())
    }

    fn normalizing_unit(&self) -> Self {
        self.inverse().unwrap_or_else(BigRational::one)
    }

    fn parse_exact(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().ok()?;
                let d: BigInt = d.trim().parse().ok()?;
                if d.is_zero() {
                    None
                } else {
                    Some(BigRational::new(n, d))
                }
            }
            None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
        }
    }
}

/// Runtime selector for the coefficient ring of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum GroundRing {
    #[serde(rename = "z")]
    Integers,
    #[serde(rename = "q")]
    Rationals,
}

impl GroundRing {
    pub fn name(self) -> &'static str {
        match self {
            GroundRing::Integers => "z",
            GroundRing::Rationals => "q",
        }
    }
}

impl std::str::FromStr for GroundRing {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "z" | "int" | "integers" => Ok(GroundRing::Integers),
            "q" | "rat" | "rationals" => Ok(GroundRing::Rationals),
            other => Err(format!("unknown ring {other:?} (expected z or q)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_units() {
        assert!(BigInt::from(-1).is_unit());
        assert!(!BigInt::from(2).is_unit());
        assert!(!BigInt::zero().is_unit());
    }

    #[test]
    fn rational_parse_and_inverse() {
        let x = BigRational::parse_exact("-3/6").unwrap();
        assert_eq!(x, BigRational::new(BigInt::from(-1), BigInt::from(2)));
        assert_eq!(x.inverse().unwrap(), BigRational::from_i64(-2));
        assert!(BigRational::parse_exact("1/0").is_none());
    }

    #[test]
    fn integer_euclid() {
        let (q, r) = BigInt::from(-7).div_rem_euclid(&BigInt::from(3));
        assert_eq!(q * BigInt::from(3) + r.clone(), BigInt::from(-7));
        assert!(r.norm() < BigUint::from(3u32));
    }
}
