//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the library is generic over (`f32` or `f64`).
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// A tolerance of `x`, floored at a small multiple of machine epsilon so
    /// that thresholds written for `f64` stay meaningful in `f32`.
    #[inline]
    fn tol(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(16.0))
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn two() -> Self {
        Self::lit(2.0)
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `log(sum_i w_i * exp(e_i))` for nonnegative weights, shifted by the
/// largest exponent. Terms with zero weight are skipped.
pub(crate) fn log_sum_exp<T: Scalar>(terms: impl Iterator<Item = (T, T)> + Clone) -> T {
    let shift = terms.clone().filter(|(w, _)| *w > T::zero()).map(|(_, e)| e).fold(T::neg_infinity(), T::max);
    if !shift.is_finite() {
        return shift;
    }
    let acc: T = terms.filter(|(w, _)| *w > T::zero()).map(|(w, e)| w * (e - shift).exp()).sum();
    shift + acc.ln()
}
