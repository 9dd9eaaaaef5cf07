//! The numeric contract the library is generic over.
//!
//! Every algorithm is written against [`Scalar`], a complex field element
//! with an associated real type. Double precision ([`C64`]) is the only
//! instantiation shipped, but nothing below assumes a particular machine
//! epsilon: tolerances are derived from `Real::epsilon()` or passed in.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::{Product, Sum};
use std::ops::Neg;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive, Zero};

pub type C64 = Complex<f64>;

pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Exact for integers below 2^53 at double precision.
    fn of(k: usize) -> Self {
        Self::from_usize(k).expect("integer representable as a real")
    }

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable as a real")
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Debug
        + Display
        + LowerExp
        + Send
        + Sync
        + 'static
{
}

pub trait Scalar:
    Copy
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + NumAssign
    + Neg<Output = Self>
    + Sum
    + Product
{
    type Real: Real;

    fn from_parts(re: Self::Real, im: Self::Real) -> Self;
    fn re(self) -> Self::Real;
    fn im(self) -> Self::Real;
    /// Modulus.
    fn abs(self) -> Self::Real;
    fn exp(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;

    fn from_real(re: Self::Real) -> Self {
        Self::from_parts(re, Self::Real::zero())
    }

    fn of(k: usize) -> Self {
        Self::from_real(Self::Real::of(k))
    }

    fn lit(x: f64) -> Self {
        Self::from_real(Self::Real::lit(x))
    }

    fn scale(self, r: Self::Real) -> Self {
        self * Self::from_real(r)
    }

    fn is_finite(self) -> bool {
        self.re().is_finite() && self.im().is_finite()
    }

    /// Parses a decimal literal such as `-1.25e3` into the real type.
    fn parse_real(text: &str) -> Option<Self::Real> {
        <Self::Real as num_traits::Num>::from_str_radix(text, 10).ok()
    }
}

impl<R: Real> Scalar for Complex<R> {
    type Real = R;

    fn from_parts(re: R, im: R) -> Self {
        Complex::new(re, im)
    }

    fn re(self) -> R {
        self.re
    }

    fn im(self) -> R {
        self.im
    }

    fn abs(self) -> R {
        self.norm()
    }

    fn exp(self) -> Self {
        Complex::exp(self)
    }

    fn sin(self) -> Self {
        Complex::sin(self)
    }

    fn cos(self) -> Self {
        Complex::cos(self)
    }
}

/// Largest modulus in a slice, zero for an empty slice.
pub fn max_abs<S: Scalar>(values: &[S]) -> S::Real {
    values
        .iter()
        .map(|v| v.abs())
        .fold(S::Real::zero(), |a, b| a.max(b))
}
