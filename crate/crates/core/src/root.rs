//! Bracketing and bisection for monotone scalar problems.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Iteration cap for user-facing bisections.
pub const MAX_BISECTION_STEPS: usize = 200;

/// Solves `f(x) = target` for increasing `f` on `[lo, hi]`, bisecting until
/// the bracket cannot shrink any further in floating point.
pub(crate) fn invert_increasing<T, F>(f: F, target: T, mut lo: T, mut hi: T) -> T
where
    T: Scalar,
    F: Fn(T) -> T,
{
    for _ in 0..2000 {
        let mid = lo + (hi - lo) * T::half();
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (f(hi) - target).abs() <= (f(lo) - target).abs() {
        hi
    } else {
        lo
    }
}

/// Grows `[start - w, start + w]` geometrically until it brackets `target`
/// for an increasing, everywhere-defined `f`.
pub(crate) fn bracket_increasing<T, F>(f: &F, target: T, start: T) -> Result<(T, T)>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    let mut w = T::one();
    for _ in 0..2000 {
        let (lo, hi) = (start - w, start + w);
        let (flo, fhi) = (f(lo), f(hi));
        if flo <= target && target <= fhi {
            return Ok((lo, hi));
        }
        if !lo.is_finite() || !hi.is_finite() {
            break;
        }
        w = w * T::two();
    }
    Err(Error::NoConvergence(2000))
}

/// Smallest `x` in `[lo, hi]` with `pred(x)` true, for a predicate that is
/// false below some threshold and true above it. Assumes `pred(hi)` holds.
/// Returns the midpoint once the bracket is narrower than `tol`.
pub(crate) fn bisect_threshold<T, P>(mut pred: P, mut lo: T, mut hi: T, tol: T) -> Result<T>
where
    T: Scalar,
    P: FnMut(T) -> Result<bool>,
{
    for _ in 0..MAX_BISECTION_STEPS {
        if hi - lo <= tol {
            return Ok(lo + (hi - lo) * T::half());
        }
        let mid = lo + (hi - lo) * T::half();
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::NoConvergence(MAX_BISECTION_STEPS))
}
