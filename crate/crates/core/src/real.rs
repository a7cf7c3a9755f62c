//! Scalar abstraction for the continuous parts of the model.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::AddAssign;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use rand::distributions::uniform::SampleUniform;

/// Floating-point scalar used for locations, weights, kernel values and
/// all derived quantities. Implemented for `f32` and `f64`; the crate-root
/// aliases pin `f64` as the default precision.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + SampleUniform
    + AddAssign
    + Sum
    + Display
    + LowerExp
    + Debug
    + FromStr
    + Send
    + Sync
    + 'static
{
    /// Converts from `f64`, rounding to the nearest representable value.
    fn of(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("f64 converts to Real")
    }

    /// Converts an exact small integer count.
    fn of_usize(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize converts to Real")
    }

    /// Widens to `f64` (exact for `f32` and `f64`).
    fn f64(self) -> f64 {
        <Self as ToPrimitive>::to_f64(&self).expect("Real converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}
