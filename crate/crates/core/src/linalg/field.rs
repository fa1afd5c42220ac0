use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar used throughout the engine.
pub type Rational = BigRational;

/// Scalar field the dense linear algebra is written against.
///
/// Two implementations exist: [`Rational`] (exact, the default) and `f64`,
/// which is only used for finite-difference rank estimation.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    /// Preference weight for choosing a pivot; `None` marks an unusable (zero) entry.
    fn pivot_weight(&self) -> Option<f64>;

    fn to_f64(&self) -> f64;

    fn sign(&self) -> i8;
}

impl Field for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn pivot_weight(&self) -> Option<f64> {
        if self.is_zero() {
            None
        } else {
            // any nonzero pivot is exact; favour small heights to limit growth
            let bits = self.numer().bits() + self.denom().bits();
            Some(-(bits as f64))
        }
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sign(&self) -> i8 {
        if self.is_zero() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
}

impl Field for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn pivot_weight(&self) -> Option<f64> {
        if *self == 0.0 {
            None
        } else {
            Some(self.abs())
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sign(&self) -> i8 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }
}

pub fn rat(numer: i64, denom: i64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(v: i64) -> Rational {
    Rational::from_i64(v)
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Canonical `"p/q"` form; integers are written without a denominator.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
