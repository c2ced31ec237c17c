//! Second-order and fractional (`v`-SD) stochastic dominance, certainty
//! equivalents and expected-utility comparison curves.

use serde::{Deserialize, Serialize};

use crate::dist::{DiscreteDistribution, MergedSteps};
use crate::error::{Error, Result};
use crate::riskmeasures::k_c;
use crate::scalar::{log_sum_exp, Scalar};
use crate::utility::{Family, ThresholdUtility};

/// Relative tolerance below which a breakpoint inequality counts as a tie.
pub const DOMINANCE_TOL: f64 = 1e-10;

/// Outcome of a dominance check `X ≤ Y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DominanceVerdict<T> {
    pub dominated: bool,
    /// Smallest breakpoint level `p` at which `ES_p(X) ≥ ES_p(Y)` fails.
    pub witness_p: Option<T>,
}

/// Result of the merged breakpoint scan behind [`ssd_dominates`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct SsdScan<T> {
    pub verdict: DominanceVerdict<T>,
    /// Whether some breakpoint inequality holds strictly.
    pub strict: bool,
}

pub(crate) fn ssd_scan<T: Scalar>(x: &DiscreteDistribution<T>, y: &DiscreteDistribution<T>) -> SsdScan<T> {
    ssd_scan_with(x, y, T::tol(DOMINANCE_TOL))
}

/// Breakpoint scan with ties up to `rel_tol · max(1, |values|)`.
pub(crate) fn ssd_scan_with<T: Scalar>(
    x: &DiscreteDistribution<T>,
    y: &DiscreteDistribution<T>,
    rel_tol: T,
) -> SsdScan<T> {
    let tol = rel_tol * x.scale().max(y.scale());
    let (mut a, mut gx, mut gy) = (T::zero(), T::zero(), T::zero());
    let mut witness = None;
    let mut strict = false;
    for (w, qx, qy) in MergedSteps::new(x, y) {
        a = a + w;
        gx = gx + w * qx;
        gy = gy + w * qy;
        let d = gy - gx;
        if d < -tol {
            witness = Some((T::one() - a).max(T::zero()));
        } else if d > tol {
            strict = true;
        }
    }
    SsdScan { verdict: DominanceVerdict { dominated: witness.is_none(), witness_p: witness }, strict }
}

/// Decides `X ≤_SSD Y`, i.e. `ES_p(X) ≥ ES_p(Y)` for every `p` in `[0, 1]`.
///
/// `(1-p)(ES_p(X) - ES_p(Y))` is piecewise linear between the merged
/// cumulative-probability kinks of both laws and vanishes at `p = 1`, so
/// checking the kinks is exact. Ties within `1e-10 · max(1, |values|)` count
/// as dominance.
pub fn ssd_dominates<T: Scalar>(x: &DiscreteDistribution<T>, y: &DiscreteDistribution<T>) -> DominanceVerdict<T> {
    ssd_scan(x, y).verdict
}

/// Decides `X ≤_{v-SD} Y` through `v(X) ≤_SSD v(Y)`.
pub fn vsd_dominates<T: Scalar>(
    x: &DiscreteDistribution<T>,
    y: &DiscreteDistribution<T>,
    v: &ThresholdUtility<T>,
) -> Result<DominanceVerdict<T>> {
    Ok(ssd_dominates(&v.apply(x)?, &v.apply(y)?))
}

/// Certainty equivalent `u^{-1}(E[u(X)])`.
pub fn certainty_equivalent<T: Scalar>(x: &DiscreteDistribution<T>, u: &ThresholdUtility<T>) -> Result<T> {
    if let Family::Cara { c } = u.family() {
        for v in x.values() {
            if !u.contains(v) {
                return Err(Error::AtomOutsideDomain(format!("{v} for {u}")));
            }
        }
        return Ok(k_c(x, c));
    }
    let ux = u.apply(x)?;
    if ux.is_degenerate() {
        return u.inverse(ux.min());
    }
    let eu = ux.mean();
    let (lo, hi) = (x.min(), x.max());
    let ce = if eu <= ux.min() {
        lo
    } else if eu >= ux.max() {
        hi
    } else {
        u.inverse(eu)?
    };
    Ok(ce.max(lo).min(hi))
}

/// `log E[e^{-cX}]`.
fn log_mgf_neg<T: Scalar>(x: &DiscreteDistribution<T>, c: T) -> T {
    log_sum_exp(x.atoms().iter().map(move |a| (a.prob, -c * a.value)))
}

/// `f(c) = E[u_c(X1)] / E[u_c(X2)]` with `u_c(x) = -e^{-cx}` on a grid of
/// positive risk-aversion levels, evaluated in log space.
pub fn eu_ratio_curve<T: Scalar>(
    x1: &DiscreteDistribution<T>,
    x2: &DiscreteDistribution<T>,
    c_grid: &[T],
) -> Result<Vec<(T, T)>> {
    c_grid
        .iter()
        .map(|&c| {
            if !(c > T::zero()) || !c.is_finite() {
                return Err(Error::InvalidParameter(format!("risk aversion grid needs c > 0, got {c}")));
            }
            let ratio = (log_mgf_neg(x1, c) - log_mgf_neg(x2, c)).exp();
            if !ratio.is_finite() {
                return Err(Error::ZeroDenominator(c.to_f64_lossy()));
            }
            Ok((c, ratio))
        })
        .collect()
}

/// Risk-aversion level in `[c_lo, c_hi]` where `f(c)` from
/// [`eu_ratio_curve`] crosses 1, if the sign of `f - 1` differs at the ends.
pub fn eu_ratio_crossing<T: Scalar>(
    x1: &DiscreteDistribution<T>,
    x2: &DiscreteDistribution<T>,
    c_lo: T,
    c_hi: T,
) -> Result<Option<T>> {
    if !(c_lo > T::zero() && c_hi > c_lo) {
        return Err(Error::InvalidParameter(format!("need 0 < c_lo < c_hi, got [{c_lo}, {c_hi}]")));
    }
    let g = |c: T| log_mgf_neg(x1, c) - log_mgf_neg(x2, c);
    let (mut lo, mut hi) = (c_lo, c_hi);
    let (glo, ghi) = (g(lo), g(hi));
    if glo == T::zero() {
        return Ok(Some(lo));
    }
    if glo.signum() == ghi.signum() {
        return Ok(None);
    }
    for _ in 0..200 {
        let mid = lo + (hi - lo) * T::half();
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid).signum() == glo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(lo + (hi - lo) * T::half()))
}

/// `n` log-spaced points between `lo > 0` and `hi`.
pub fn log_grid<T: Scalar>(lo: T, hi: T, n: usize) -> Vec<T> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * T::lit(i as f64) / T::lit((n - 1) as f64)).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    type D = DiscreteDistribution<f64>;
    type U = ThresholdUtility<f64>;

    fn intro() -> (D, D) {
        (D::new([(0.0, 0.75), (10.0, 0.25)]).unwrap(), D::new([(-1.0, 0.25), (4.0, 0.75)]).unwrap())
    }

    fn coin() -> D {
        D::new([(-1.0, 0.5), (1.0, 0.5)]).unwrap()
    }

    #[test]
    fn jensen() {
        let x = D::new([(-2.0, 0.2), (0.5, 0.5), (3.0, 0.3)]).unwrap();
        let m = D::point_mass(x.mean()).unwrap();
        assert!(ssd_dominates(&x, &m).dominated);
        assert!(!ssd_dominates(&m, &x).dominated);
    }

    #[test]
    fn intro_lotteries_are_incomparable() {
        let (x1, x2) = intro();
        let v21 = ssd_dominates(&x2, &x1);
        assert!(!v21.dominated);
        assert!(v21.witness_p.unwrap() < 0.25);
        let v12 = ssd_dominates(&x1, &x2);
        assert!(!v12.dominated);
        // ES_p(X1) < ES_p(X2) exactly for p in (0.6875, 1].
        let p = v12.witness_p.unwrap();
        assert!(p > 0.6875 && p <= 1.0, "{p}");
        assert!(x1.es(p).unwrap() < x2.es(p).unwrap());
    }

    #[test]
    fn bigger_spread_is_dominated() {
        let small = D::mean_preserving_spread(1.0, 0.5, 0.3).unwrap();
        let big = D::mean_preserving_spread(1.0, 1.5, 0.3).unwrap();
        assert!(ssd_dominates(&big, &small).dominated);
        assert!(!ssd_dominates(&small, &big).dominated);
    }

    #[test]
    fn identity_threshold_delegates_to_ssd() {
        let (x1, x2) = intro();
        let id = U::identity();
        assert_eq!(vsd_dominates(&x1, &x2, &id).unwrap(), ssd_dominates(&x1, &x2));
        assert_eq!(vsd_dominates(&x2, &x1, &id).unwrap(), ssd_dominates(&x2, &x1));
    }

    #[test]
    fn cara_one_is_ssd_of_exponentials() {
        let (x1, x2) = intro();
        let u = U::cara(1.0).unwrap();
        let e1 = x1.transform(|x| Ok(x.exp())).unwrap();
        let e2 = x2.transform(|x| Ok(x.exp())).unwrap();
        assert_eq!(vsd_dominates(&x1, &x2, &u).unwrap(), ssd_dominates(&e1, &e2));
        assert_eq!(vsd_dominates(&x2, &x1, &u).unwrap(), ssd_dominates(&e2, &e1));
    }

    #[test]
    fn payoff_is_dominated_by_its_certainty_equivalent() {
        let x = D::new([(0.5, 0.3), (1.0, 0.3), (4.0, 0.4)]).unwrap();
        for u in [U::cara(-2.0).unwrap(), U::log(), U::logistic(1.0).unwrap(), U::crra(0.5).unwrap()] {
            let k = D::point_mass(certainty_equivalent(&x, &u).unwrap()).unwrap();
            assert!(vsd_dominates(&x, &k, &u).unwrap().dominated, "{u}");
        }
    }

    #[test]
    fn out_of_domain_atoms_are_reported() {
        let err = vsd_dominates(&coin(), &coin(), &U::log()).unwrap_err();
        assert!(err.to_string().starts_with("atom outside utility domain"), "{err}");
    }

    #[test]
    fn certainty_equivalent_examples() {
        for u in [U::cara(1.5).unwrap(), U::log(), U::sahara(1.0, 1.0, 0.0).unwrap()] {
            assert_abs_diff_eq!(certainty_equivalent(&D::point_mass(2.0).unwrap(), &u).unwrap(), 2.0, epsilon = 1e-12);
        }
        for c in [-2.0f64, -0.5, 0.3, 3.0] {
            let k = certainty_equivalent(&coin(), &U::cara(c).unwrap()).unwrap();
            assert_abs_diff_eq!(k, c.cosh().ln() / c, epsilon = 1e-14);
        }
        let averse = certainty_equivalent(&coin(), &U::cara(-1.0).unwrap()).unwrap();
        let loving = certainty_equivalent(&coin(), &U::cara(1.0).unwrap()).unwrap();
        assert!(averse < 0.0 && 0.0 < loving);
    }

    #[test]
    fn eu_ratio_examples() {
        let (x1, x2) = intro();
        let grid = log_grid(0.01, 5.0, 200);
        for (_, r) in eu_ratio_curve(&x1, &x1, &grid).unwrap() {
            assert_abs_diff_eq!(r, 1.0, epsilon = 1e-14);
        }
        let curve = eu_ratio_curve(&x1, &x2, &grid).unwrap();
        assert!(curve[0].1 > 1.0);
        assert!(curve.last().unwrap().1 < 1.0);
        let c_star = eu_ratio_crossing(&x1, &x2, 0.01, 5.0).unwrap().unwrap();
        for (c, r) in curve {
            if c < c_star - 1e-9 {
                assert!(r > 1.0);
            } else if c > c_star + 1e-9 {
                assert!(r <= 1.0);
            }
        }
        let t = 3.0;
        let s1 = x1.scale_by(t).unwrap();
        let s2 = x2.scale_by(t).unwrap();
        let a = eu_ratio_curve(&x1, &x2, &[0.6]).unwrap()[0].1;
        let b = eu_ratio_curve(&s1, &s2, &[0.2]).unwrap()[0].1;
        assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        assert!(eu_ratio_curve(&x1, &x2, &[0.0]).is_err());
    }
}
