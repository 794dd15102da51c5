//! Scalar abstraction so the whole library runs at `f32` or `f64`.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar used for coordinates, amplitudes and probabilities.
///
/// Implemented for `f32` and `f64`; all tolerances in the crate are written
/// as `f64` literals and converted through [`Scalar::of`].
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` constant.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable in scalar type")
    }

    /// Lossy view as `f64`, used for error reporting and text output.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact conversion of a small index.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("index representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
