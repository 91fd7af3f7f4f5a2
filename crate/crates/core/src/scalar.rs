//! Scalar abstraction shared by every solver in the crate.
//!
//! Log-potentials, NMRF weights and flow capacities are all generic over
//! [`Scalar`]. Floating point types use a positive default tolerance; the
//! exact rational type uses zero, so every comparison it makes is exact.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, SubAssign};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// A real-like value usable as a log-potential or node weight.
pub trait Scalar:
    Copy
    + PartialOrd
    + Debug
    + Display
    + Signed
    + AddAssign
    + SubAssign
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts from a decimal-parsed double; `None` if not representable.
    fn from_f64(x: f64) -> Option<Self>;

    fn to_f64(self) -> f64;

    /// False for NaN and infinities.
    fn is_finite_value(self) -> bool;

    /// Exact rational image of the value (floats convert bit-exactly).
    fn to_exact(self) -> BigRational;

    /// Tolerance used for sign tests and pruning when the caller does not
    /// supply one.
    fn default_eps() -> Self;

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Option<Self> {
        Some(x)
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
    fn to_exact(self) -> BigRational {
        BigRational::from_float(self).expect("finite value")
    }
    fn default_eps() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn from_f64(x: f64) -> Option<Self> {
        let y = x as f32;
        (y.is_finite() || !x.is_finite()).then_some(y)
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
    fn to_exact(self) -> BigRational {
        BigRational::from_float(self).expect("finite value")
    }
    fn default_eps() -> Self {
        1e-5
    }
}

impl Scalar for Rational64 {
    fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        // Exact when the double is a dyadic rational that fits in i64 parts.
        let exact = BigRational::from_float(x)?;
        match (exact.numer().to_i64(), exact.denom().to_i64()) {
            (Some(n), Some(d)) => Some(Rational64::new(n, d)),
            _ => <Rational64 as FromPrimitive>::from_f64(x),
        }
    }
    fn to_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
    fn is_finite_value(self) -> bool {
        true
    }
    fn to_exact(self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
    fn default_eps() -> Self {
        Rational64::from_integer(0)
    }
}
