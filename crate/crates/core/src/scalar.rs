//! Scalar abstraction for the numerical kernels.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::float::{Float, FloatConst};
use num_traits::{FromPrimitive, ToPrimitive};

/// Floating-point scalar used throughout the crate.
///
/// Implemented by `f32` and `f64`. The bound set is what the kernels
/// actually use: IEEE arithmetic, the usual constants, conversions from
/// `f64` literals, and thread safety for parallel callers.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum<Self>
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Conversion from an `f64` literal, rounding to the nearest value.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("float-to-float conversion cannot fail")
    }

    /// Lossy view as `f64` (exact for `f32` and `f64`), for diagnostics.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("float-to-f64 conversion cannot fail")
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Sum<Self>
        + Debug
        + Display
        + LowerExp
        + Send
        + Sync
        + 'static
{
}

/// Compensated accumulator; keeps long sums near machine precision.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Kahan<T> {
    sum: T,
    carry: T,
}

impl<T: Real> Kahan<T> {
    pub(crate) fn new() -> Self {
        Self {
            sum: T::zero(),
            carry: T::zero(),
        }
    }

    pub(crate) fn add(&mut self, x: T) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub(crate) fn value(&self) -> T {
        self.sum
    }
}
