//! Scalar traits.
//!
//! Linear algebra, invariants and frames only need ring operations with
//! division, so they are written against [`Field`]. Truncated Taylor series
//! ([`crate::Jet`]) implement [`Field`] and [`Elementary`], which is how the
//! same code yields derivatives. Anything that compares or branches on
//! magnitudes needs [`Real`].

use num_traits::{Float, FloatConst, FromPrimitive, NumCast, One, Zero};
use std::fmt::{Debug, Display, LowerExp};
use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Field:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;

    /// Value part as f64. For a truncated series this is the constant term;
    /// pivoting and tolerance guards look only at it.
    fn lead(&self) -> f64;
}

pub trait Elementary: Field {
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
    fn powf(self, e: f64) -> Self;
    fn powi(self, n: i32) -> Self;
}

pub trait Real: Elementary + PartialOrd + Display + LowerExp {
    fn abs(self) -> Self;
    fn max(self, other: Self) -> Self;
    fn min(self, other: Self) -> Self;
    fn is_finite(self) -> bool;
    fn floor(self) -> Self;
    fn atan2(self, other: Self) -> Self;
    fn epsilon() -> Self;
    fn pi() -> Self;
    fn from_usize(n: usize) -> Self;
    fn to_f64_lossless(self) -> f64;
}

impl<T> Field for T
where
    T: Float + FromPrimitive + Debug + Send + Sync + 'static,
{
    #[inline]
    fn from_f64(x: f64) -> Self {
        <T as NumCast>::from(x).expect("f64 converts to every float type")
    }
    #[inline]
    fn lead(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Elementary for T
where
    T: Float + FromPrimitive + Debug + Send + Sync + 'static,
{
    fn sqrt(self) -> Self {
        Float::sqrt(self)
    }
    fn exp(self) -> Self {
        Float::exp(self)
    }
    fn ln(self) -> Self {
        Float::ln(self)
    }
    fn sin(self) -> Self {
        Float::sin(self)
    }
    fn cos(self) -> Self {
        Float::cos(self)
    }
    fn sinh(self) -> Self {
        Float::sinh(self)
    }
    fn cosh(self) -> Self {
        Float::cosh(self)
    }
    fn powf(self, e: f64) -> Self {
        Float::powf(self, <Self as Field>::from_f64(e))
    }
    fn powi(self, n: i32) -> Self {
        Float::powi(self, n)
    }
}

impl<T> Real for T
where
    T: Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Send + Sync + 'static,
{
    fn abs(self) -> Self {
        Float::abs(self)
    }
    fn max(self, other: Self) -> Self {
        Float::max(self, other)
    }
    fn min(self, other: Self) -> Self {
        Float::min(self, other)
    }
    fn is_finite(self) -> bool {
        Float::is_finite(self)
    }
    fn floor(self) -> Self {
        Float::floor(self)
    }
    fn atan2(self, other: Self) -> Self {
        Float::atan2(self, other)
    }
    fn epsilon() -> Self {
        Float::epsilon()
    }
    fn pi() -> Self {
        FloatConst::PI()
    }
    fn from_usize(n: usize) -> Self {
        <T as NumCast>::from(n).expect("usize converts to float")
    }
    fn to_f64_lossless(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Shorthand for converting an f64 literal.
#[inline]
pub fn c<T: Field>(x: f64) -> T {
    T::from_f64(x)
}

/// Lift a real number into any field (e.g. a constant jet).
#[inline]
pub fn lift<T: Real, S: Field>(x: T) -> S {
    S::from_f64(x.to_f64_lossless())
}
