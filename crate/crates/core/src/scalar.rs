//! Scalar abstraction so the toolkit runs on `f32` or `f64`.

use std::fmt;
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar used throughout the toolkit.
///
/// Everything numeric (scale boundaries, scores, risks, losses) is generic
/// over this trait; `f64` is the default via the aliases at the crate root.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Shorthand for converting literals; panics only on values outside the
/// scalar's range, which never happens for the in-crate constants.
pub(crate) fn num<F: Scalar>(x: f64) -> F {
    F::from_f64(x).expect("constant representable in scalar type")
}
