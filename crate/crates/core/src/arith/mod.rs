//! Exact arithmetic over the rationals and over the rational-function
//! field Q(t).
//!
//! Everything above this layer is written against the [`Scalar`] trait so
//! the same straightening code runs symbolically (coefficients in Q(t)) and
//! after specialization of `t` (coefficients in Q).

mod poly;
mod ratfun;

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub use poly::UniPoly;
pub use ratfun::{LaurentTerm, RationalFunction};

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// A field element usable as a coefficient of Verma-module vectors.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    fn from_integer(n: i128) -> Self;

    fn from_rational(q: Rational) -> Self;

    fn checked_div(&self, other: &Self) -> Result<Self>;

    /// Multiplication by a machine integer; hot path of the straightening engine.
    fn scale(&self, n: i128) -> Self {
        self.clone() * &Self::from_integer(n)
    }

    /// Sum of many values; implementations may batch the work.
    fn sum_all(values: Vec<Self>) -> Self {
        values.into_iter().fold(Self::zero(), |acc, v| acc + &v)
    }

    fn to_json(&self) -> Value;
}

impl Scalar for Rational {
    fn from_integer(n: i128) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_rational(q: Rational) -> Self {
        q
    }

    fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self / other)
    }

    fn scale(&self, n: i128) -> Self {
        self * BigInt::from(n)
    }

    fn to_json(&self) -> Value {
        rational_to_json(self)
    }
}

/// Renders a rational as `"num/den"`, or `"num"` when the denominator is one.
pub fn rational_to_json(q: &Rational) -> Value {
    Value::String(q.to_string())
}

/// Parses `"a/b"` or `"a"` with optional leading minus sign. Floats and any
/// other notation are rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(text.to_owned());
    let is_integer = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    if !is_integer(num) {
        return Err(bad());
    }
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = match den {
        Some(d) if is_integer(d) && !d.starts_with('-') => BigInt::from_str(d).map_err(|_| bad())?,
        Some(_) => return Err(bad()),
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// `n!` as an exact integer.
pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Convenience constructor for small rationals.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_strict_rationals() {
        assert_eq!(parse_rational("-3/2").unwrap(), rational(-3, 2));
        assert_eq!(parse_rational("4/6").unwrap(), rational(2, 3));
        assert_eq!(parse_rational("7").unwrap(), rational(7, 1));
        for bad in ["1.5", "", "-", "3/", "/2", "1/0", "1/-2", "+1", " 1", "1e3", "--1"] {
            assert!(parse_rational(bad).is_err(), "{bad} should be rejected");
        }
    }

    #[test]
    fn rational_json_form() {
        assert_eq!(rational_to_json(&rational(-3, 2)), Value::from("-3/2"));
        assert_eq!(rational_to_json(&rational(4, 1)), Value::from("4"));
        assert_eq!(rational_to_json(&rational(0, 5)), Value::from("0"));
    }
}
