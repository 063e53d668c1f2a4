//! Floating-point abstraction used by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Scalar type the whole crate is generic over.
///
/// Covers arithmetic (`Float`, `NumAssign`), the constants needed by the
/// trigonometric encodings (`FloatConst`), literal/count conversion
/// (`FromPrimitive`, `ToPrimitive`), and the marker traits required for
/// data-parallel loops. Implemented for `f32` and `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lifts an `f64` constant into this scalar type.
    #[inline]
    fn of(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite f64 constant converts to scalar")
    }

    /// Lifts a count into this scalar type.
    #[inline]
    fn of_usize(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("count converts to scalar")
    }

    /// Exact `f64` image of this value, for interop with seeded sampling
    /// and file formats that are defined in double precision.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
