use crate::dist::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::orders::ssd_scan_with;
use crate::root::bisect_threshold;
use crate::scalar::Scalar;
use crate::utility::ThresholdUtility;

/// Default bisection width for base risk measures and `c_max`.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Tie tolerance of the dominance test inside the bisection. The usual
/// dominance slack would move the infimum by roughly slack / kink mass.
const EXACT_TIE: f64 = 1e-15;

fn dominates_shifted<T: Scalar>(
    vz: &DiscreteDistribution<T>,
    v: &ThresholdUtility<T>,
    x: &DiscreteDistribution<T>,
    m: T,
) -> Result<bool> {
    Ok(ssd_scan_with(vz, &v.apply(&x.shift(m))?, T::tol(EXACT_TIE)).verdict.dominated)
}

/// Base risk measure `ρ_{Z,v}(X) = inf{m : Z ≤_{v-SD} X + m}`.
///
/// The feasible set of `m` is upward closed, so bisection on the bracket
/// `[min Z - max X, max Z - min X]` applies; at the upper end `X + m` dominates
/// `Z` atomwise. When the domain of `v` is bounded below the lower end is
/// raised to keep `X + m` inside it; if the shifted payoff is still feasible
/// there, the infimum sits on the domain boundary and an error is returned.
pub fn base_risk_measure<T: Scalar>(
    z: &DiscreteDistribution<T>,
    v: &ThresholdUtility<T>,
    x: &DiscreteDistribution<T>,
    tol: T,
) -> Result<T> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let vz = v.apply(z)?;
    let (dlo, dhi) = v.domain();
    let mut lo = z.min() - x.max();
    let hi = z.max() - x.min();
    let leave = |lo: T, hi: T| Error::ShiftLeavesDomain { lo: lo.to_f64_lossy(), hi: hi.to_f64_lossy() };
    if !(x.max() + hi < dhi) {
        return Err(leave(lo, hi));
    }
    let clamped = dlo.is_finite() && !(x.min() + lo > dlo);
    if clamped {
        let edge = dlo - x.min();
        lo = edge + T::tol(1e-12) * T::one().max(edge.abs());
        if !(lo < hi) || dominates_shifted(&vz, v, x, lo)? {
            return Err(leave(lo, hi));
        }
    }
    bisect_threshold(|m| dominates_shifted(&vz, v, x, m), lo, hi, tol)
}
