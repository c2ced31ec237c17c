//! Threshold utilities: increasing, twice differentiable functions on an open
//! interval that anchor a fractional dominance order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dist::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::root::{bracket_increasing, invert_increasing};
use crate::scalar::Scalar;

/// Default half-width of the Kahneman–Tversky smoothing window around zero.
pub const KT_DEFAULT_EPS: f64 = 0.05;

/// Parameters of a named utility family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family<T> {
    /// `e^{cx}` for `c > 0`, `x` for `c = 0`, `-e^{cx}` for `c < 0`.
    Cara { c: T },
    /// `x^a / a` on `(0, ∞)`, `log x` for `a = 0`.
    Crra { a: T },
    /// `1 / (1 + e^{-αx})`.
    Logistic { alpha: T },
    /// Absolute risk aversion `α / sqrt(β² + (x - d)²)`, normalised so `v(d) = 0`.
    Sahara { alpha: T, beta: T, d: T },
    /// `x^α` for `x ≥ ε`, `-(-x)^β` for `x ≤ -ε`, quintic bridge in between.
    KahnemanTversky { alpha: T, beta: T, eps: T },
    /// `log x` on `(0, ∞)`.
    Log,
    /// `-log(-x)` on `(-∞, 0)`.
    NegLogNeg,
}

/// Monomial coefficients of the quintic bridge in `s = (x + ε) / (2ε)`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Bridge<T> {
    coef: [T; 6],
    eps: T,
}

impl<T: Scalar> Bridge<T> {
    fn width(&self) -> T {
        self.eps * T::two()
    }

    fn s(&self, x: T) -> T {
        (x + self.eps) / self.width()
    }

    fn value(&self, x: T) -> T {
        let s = self.s(x);
        self.coef.iter().rev().fold(T::zero(), |acc, &c| acc * s + c)
    }

    fn deriv(&self, x: T) -> T {
        let s = self.s(x);
        let mut acc = T::zero();
        for k in (1..6).rev() {
            acc = acc * s + T::lit(k as f64) * self.coef[k];
        }
        acc / self.width()
    }

    fn deriv2(&self, x: T) -> T {
        let s = self.s(x);
        let mut acc = T::zero();
        for k in (2..6).rev() {
            acc = acc * s + T::lit((k * (k - 1)) as f64) * self.coef[k];
        }
        acc / (self.width() * self.width())
    }

    /// Quintic Hermite interpolant matching value, slope and curvature at
    /// both ends of `[-ε, ε]`.
    fn fit(eps: T, left: [T; 3], right: [T; 3]) -> Self {
        let h = eps * T::two();
        let [y0, d0, e0] = [left[0], h * left[1], h * h * left[2]];
        let [y1, d1, e1] = [right[0], h * right[1], h * h * right[2]];
        let l = T::lit;
        let coef = [
            y0,
            d0,
            e0 * T::half(),
            l(-10.0) * y0 - l(6.0) * d0 - l(1.5) * e0 + T::half() * e1 - l(4.0) * d1 + l(10.0) * y1,
            l(15.0) * y0 + l(8.0) * d0 + l(1.5) * e0 - e1 + l(7.0) * d1 - l(15.0) * y1,
            l(-6.0) * y0 - l(3.0) * d0 - T::half() * e0 + T::half() * e1 - l(3.0) * d1 + l(6.0) * y1,
        ];
        Self { coef, eps }
    }
}

/// A named threshold utility together with its open domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Family<T>", into = "Family<T>")]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct ThresholdUtility<T> {
    family: Family<T>,
    bridge: Option<Bridge<T>>,
}

impl<T: Scalar> TryFrom<Family<T>> for ThresholdUtility<T> {
    type Error = Error;

    fn try_from(family: Family<T>) -> Result<Self> {
        Self::new(family)
    }
}

impl<T: Scalar> From<ThresholdUtility<T>> for Family<T> {
    fn from(u: ThresholdUtility<T>) -> Self {
        u.family
    }
}

fn require<T: Scalar>(ok: bool, what: &str, value: T) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{what}, got {value}")))
    }
}

fn describe_interval<T: Scalar>(lo: T, hi: T) -> String {
    match (lo.is_finite(), hi.is_finite()) {
        (true, false) => format!("> {lo}"),
        (false, true) => format!("< {hi}"),
        (true, true) => format!("in ({lo}, {hi})"),
        (false, false) => "finite".to_string(),
    }
}

impl<T: Scalar> ThresholdUtility<T> {
    pub fn new(family: Family<T>) -> Result<Self> {
        let zero = T::zero();
        let bridge = match family {
            Family::Cara { c } => {
                require(true, "CARA coefficient must be finite", c)?;
                None
            }
            Family::Crra { a } => {
                require(true, "CRRA exponent must be finite", a)?;
                None
            }
            Family::Logistic { alpha } => {
                require(alpha > zero, "logistic steepness must be positive", alpha)?;
                None
            }
            Family::Sahara { alpha, beta, d } => {
                require(alpha > zero, "SAHARA alpha must be positive", alpha)?;
                require(beta > zero, "SAHARA beta must be positive", beta)?;
                require(true, "SAHARA shift must be finite", d)?;
                None
            }
            Family::KahnemanTversky { alpha, beta, eps } => {
                require(alpha > zero, "KT gain exponent must be positive", alpha)?;
                require(beta > zero, "KT loss exponent must be positive", beta)?;
                require(eps > zero, "KT smoothing width must be positive", eps)?;
                Some(Self::kt_bridge(alpha, beta, eps)?)
            }
            Family::Log | Family::NegLogNeg => None,
        };
        Ok(Self { family, bridge })
    }

    pub fn cara(c: T) -> Result<Self> {
        Self::new(Family::Cara { c })
    }

    pub fn crra(a: T) -> Result<Self> {
        Self::new(Family::Crra { a })
    }

    pub fn logistic(alpha: T) -> Result<Self> {
        Self::new(Family::Logistic { alpha })
    }

    pub fn sahara(alpha: T, beta: T, d: T) -> Result<Self> {
        Self::new(Family::Sahara { alpha, beta, d })
    }

    pub fn kahneman_tversky(alpha: T, beta: T, eps: T) -> Result<Self> {
        Self::new(Family::KahnemanTversky { alpha, beta, eps })
    }

    pub fn log() -> Self {
        Self { family: Family::Log, bridge: None }
    }

    pub fn neg_log_neg() -> Self {
        Self { family: Family::NegLogNeg, bridge: None }
    }

    /// The SSD threshold `CARA(0)`, i.e. the identity.
    pub fn identity() -> Self {
        Self { family: Family::Cara { c: T::zero() }, bridge: None }
    }

    pub fn family(&self) -> Family<T> {
        self.family
    }

    fn kt_bridge(alpha: T, beta: T, eps: T) -> Result<Bridge<T>> {
        let one = T::one();
        let left = [-eps.powf(beta), beta * eps.powf(beta - one), beta * (one - beta) * eps.powf(beta - T::two())];
        let right =
            [eps.powf(alpha), alpha * eps.powf(alpha - one), alpha * (alpha - one) * eps.powf(alpha - T::two())];
        let bridge = Bridge::fit(eps, left, right);
        let n = 2000;
        for i in 0..=n {
            let x = -eps + bridge.width() * T::lit(i as f64 / n as f64);
            let d = bridge.deriv(x);
            if !(d > T::zero()) {
                return Err(Error::InvalidParameter(format!(
                    "KT bridge on (-{eps}, {eps}) is not increasing (slope {d} at {x})"
                )));
            }
        }
        Ok(bridge)
    }

    /// Open domain `(lower, upper)`, with infinite endpoints where unbounded.
    pub fn domain(&self) -> (T, T) {
        let (ninf, inf, zero) = (T::neg_infinity(), T::infinity(), T::zero());
        match self.family {
            Family::Crra { .. } | Family::Log => (zero, inf),
            Family::NegLogNeg => (ninf, zero),
            _ => (ninf, inf),
        }
    }

    /// Open range `v(I)`.
    pub fn range(&self) -> (T, T) {
        let (ninf, inf, zero, one) = (T::neg_infinity(), T::infinity(), T::zero(), T::one());
        match self.family {
            Family::Cara { c } if c > zero => (zero, inf),
            Family::Cara { c } if c < zero => (ninf, zero),
            Family::Crra { a } if a > zero => (zero, inf),
            Family::Crra { a } if a < zero => (ninf, zero),
            Family::Logistic { .. } => (zero, one),
            Family::Sahara { alpha, beta, .. } if alpha > one => (ninf, alpha * beta / (alpha * alpha - one)),
            _ => (ninf, inf),
        }
    }

    pub fn contains(&self, x: T) -> bool {
        let (lo, hi) = self.domain();
        x.is_finite() && x > lo && x < hi
    }

    fn check(&self, x: T) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            let (lo, hi) = self.domain();
            Err(Error::OutsideDomain { value: x.to_f64_lossy(), bound: describe_interval(lo, hi) })
        }
    }

    fn check_range(&self, y: T) -> Result<()> {
        let (lo, hi) = self.range();
        if y.is_finite() && y > lo && y < hi {
            Ok(())
        } else {
            Err(Error::OutsideDomain { value: y.to_f64_lossy(), bound: describe_interval(lo, hi) })
        }
    }

    /// `v(x)`.
    pub fn eval(&self, x: T) -> Result<T> {
        self.check(x)?;
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: T) -> T {
        let (zero, one) = (T::zero(), T::one());
        match self.family {
            Family::Cara { c } if c > zero => (c * x).exp(),
            Family::Cara { c } if c < zero => -(c * x).exp(),
            Family::Cara { .. } => x,
            Family::Crra { a } if a == zero => x.ln(),
            Family::Crra { a } => x.powf(a) / a,
            Family::Logistic { alpha } => one / (one + (-alpha * x).exp()),
            Family::Sahara { alpha, beta, d } => {
                let u = ((x - d) / beta).asinh();
                sahara_of_u(alpha, beta, u)
            }
            Family::KahnemanTversky { alpha, beta, eps } => {
                if x >= eps {
                    x.powf(alpha)
                } else if x <= -eps {
                    -(-x).powf(beta)
                } else {
                    self.bridge.expect("KT bridge").value(x)
                }
            }
            Family::Log => x.ln(),
            Family::NegLogNeg => -(-x).ln(),
        }
    }

    /// `v'(x)`.
    pub fn deriv(&self, x: T) -> Result<T> {
        self.check(x)?;
        let (zero, one) = (T::zero(), T::one());
        Ok(match self.family {
            Family::Cara { c } if c == zero => one,
            Family::Cara { c } => c.abs() * (c * x).exp(),
            Family::Crra { a } => x.powf(a - one),
            Family::Logistic { alpha } => alpha / ((one + (-alpha * x).exp()) * (one + (alpha * x).exp())),
            Family::Sahara { alpha, beta, d } => (-alpha * ((x - d) / beta).asinh()).exp(),
            Family::KahnemanTversky { alpha, beta, eps } => {
                if x >= eps {
                    alpha * x.powf(alpha - one)
                } else if x <= -eps {
                    beta * (-x).powf(beta - one)
                } else {
                    self.bridge.expect("KT bridge").deriv(x)
                }
            }
            Family::Log => one / x,
            Family::NegLogNeg => -one / x,
        })
    }

    /// `v''(x)`.
    pub fn deriv2(&self, x: T) -> Result<T> {
        let d1 = self.deriv(x)?;
        Ok(match self.family {
            Family::KahnemanTversky { eps, .. } if x.abs() < eps => self.bridge.expect("KT bridge").deriv2(x),
            _ => -self.risk_aversion(x)? * d1,
        })
    }

    /// Arrow–Pratt coefficient `-v''(x) / v'(x)`.
    pub fn risk_aversion(&self, x: T) -> Result<T> {
        self.check(x)?;
        let one = T::one();
        Ok(match self.family {
            Family::Cara { c } => -c,
            Family::Crra { a } => (one - a) / x,
            Family::Logistic { alpha } => alpha * (alpha * x * T::half()).tanh(),
            Family::Sahara { alpha, beta, d } => alpha / beta.hypot(x - d),
            Family::KahnemanTversky { alpha, beta, eps } => {
                if x >= eps {
                    (one - alpha) / x
                } else if x <= -eps {
                    (one - beta) / x
                } else {
                    let b = self.bridge.expect("KT bridge");
                    -b.deriv2(x) / b.deriv(x)
                }
            }
            Family::Log => one / x,
            Family::NegLogNeg => one / x,
        })
    }

    /// `v^{-1}(y)` for `y` in the open range `v(I)`.
    pub fn inverse(&self, y: T) -> Result<T> {
        self.check_range(y)?;
        let (zero, one) = (T::zero(), T::one());
        Ok(match self.family {
            Family::Cara { c } if c > zero => y.ln() / c,
            Family::Cara { c } if c < zero => (-y).ln() / c,
            Family::Cara { .. } => y,
            Family::Crra { a } if a == zero => y.exp(),
            Family::Crra { a } => (a * y).powf(one / a),
            Family::Logistic { alpha } => (y / (one - y)).ln() / alpha,
            Family::Sahara { alpha, beta, d } => {
                let f = |u: T| sahara_of_u(alpha, beta, u);
                let (lo, hi) = bracket_increasing(&f, y, zero)?;
                let u = invert_increasing(f, y, lo, hi);
                d + beta * u.sinh()
            }
            Family::KahnemanTversky { alpha, beta, eps } => {
                if y >= eps.powf(alpha) {
                    y.powf(one / alpha)
                } else if y <= -eps.powf(beta) {
                    -(-y).powf(one / beta)
                } else {
                    let b = self.bridge.expect("KT bridge");
                    invert_increasing(|x| b.value(x), y, -eps, eps)
                }
            }
            Family::Log => y.exp(),
            Family::NegLogNeg => -(-y).exp(),
        })
    }

    /// Pushforward `v(X)`; fails if any atom lies outside the domain.
    pub fn apply(&self, x: &DiscreteDistribution<T>) -> Result<DiscreteDistribution<T>> {
        x.transform(|value| {
            self.eval(value).map_err(|_| {
                let (lo, hi) = self.domain();
                Error::AtomOutsideDomain(format!("{value} not {} for {self}", describe_interval(lo, hi)))
            })
        })
    }

    /// Whether `v'` vanishes at the top or explodes at the bottom of the
    /// domain, per the closed-form verdict for each family.
    pub fn satisfies_inada(&self) -> bool {
        match self.family {
            Family::Cara { c } => c < T::zero(),
            Family::Crra { a } => a < T::one(),
            Family::Logistic { .. } | Family::Sahara { .. } => true,
            Family::KahnemanTversky { .. } => true,
            Family::Log => true,
            Family::NegLogNeg => false,
        }
    }

    /// Closed-form verdict on the growth condition used by the
    /// positive-homogeneity impossibility results.
    pub fn satisfies_star(&self) -> bool {
        match self.family {
            Family::Cara { c } => c < T::zero(),
            Family::Crra { a } => a == T::zero(),
            Family::Logistic { .. } | Family::Sahara { .. } => true,
            Family::KahnemanTversky { alpha, beta, .. } => alpha < beta,
            Family::Log => true,
            Family::NegLogNeg => false,
        }
    }
}

fn sahara_of_u<T: Scalar>(alpha: T, beta: T, u: T) -> T {
    let one = T::one();
    let half_beta = beta * T::half();
    if (alpha - one).abs() <= T::epsilon() {
        half_beta * (u - (-T::two() * u).exp_m1() * T::half())
    } else {
        half_beta * (((one - alpha) * u).exp_m1() / (one - alpha) - (-(one + alpha) * u).exp_m1() / (one + alpha))
    }
}

/// Prints the textual spec accepted by the command line, e.g. `cara:-1`.
impl<T: Scalar> fmt::Display for ThresholdUtility<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Cara { c } => write!(f, "cara:{c}"),
            Family::Crra { a } => write!(f, "crra:{a}"),
            Family::Logistic { alpha } => write!(f, "logistic:{alpha}"),
            Family::Sahara { alpha, beta, d } => write!(f, "sahara:{alpha},{beta},{d}"),
            Family::KahnemanTversky { alpha, beta, eps } => write!(f, "kt:{alpha},{beta},{eps}"),
            Family::Log => write!(f, "log"),
            Family::NegLogNeg => write!(f, "neglogneg"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    type U = ThresholdUtility<f64>;

    fn zoo() -> Vec<U> {
        vec![
            U::cara(1.0).unwrap(),
            U::cara(-1.5).unwrap(),
            U::identity(),
            U::crra(0.5).unwrap(),
            U::crra(-1.0).unwrap(),
            U::crra(0.0).unwrap(),
            U::logistic(2.0).unwrap(),
            U::sahara(1.0, 1.0, 0.0).unwrap(),
            U::sahara(0.5, 2.0, 1.0).unwrap(),
            U::sahara(2.0, 1.0, -1.0).unwrap(),
            U::kahneman_tversky(0.5, 0.8, 0.05).unwrap(),
            U::kahneman_tversky(0.5, 0.5, 0.05).unwrap(),
            U::log(),
            U::neg_log_neg(),
        ]
    }

    fn interior(u: &U) -> Vec<f64> {
        let (lo, hi) = u.domain();
        (0..100)
            .map(|i| {
                let t = (i as f64 + 0.5) / 100.0;
                match (lo.is_finite(), hi.is_finite()) {
                    (true, false) => lo + 0.05 + 4.0 * t,
                    (false, true) => hi - 0.05 - 4.0 * t,
                    _ => -3.0 + 6.0 * t,
                }
            })
            .collect()
    }

    #[test]
    fn named_values() {
        assert_eq!(U::cara(1.0).unwrap().eval(0.0).unwrap(), 1.0);
        assert_eq!(U::cara(-1.0).unwrap().eval(0.0).unwrap(), -1.0);
        assert_eq!(U::logistic(1.0).unwrap().eval(0.0).unwrap(), 0.5);
        assert_eq!(U::logistic(1.0).unwrap().inverse(0.5).unwrap(), 0.0);
        assert_abs_diff_eq!(U::log().eval(std::f64::consts::E).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(U::log().deriv(2.0).unwrap(), 0.5);
    }

    #[test]
    fn named_risk_aversion() {
        for c in [-2.0, 0.0, 0.7] {
            let u = U::cara(c).unwrap();
            for x in [-1.0, 0.0, 3.0] {
                assert_eq!(u.risk_aversion(x).unwrap(), -c);
            }
        }
        assert_abs_diff_eq!(U::crra(0.3).unwrap().risk_aversion(2.0).unwrap(), 0.35, epsilon = 1e-15);
        assert_abs_diff_eq!(U::sahara(1.5, 0.5, 2.0).unwrap().risk_aversion(2.0).unwrap(), 3.0);
    }

    #[test]
    fn domain_violations_report_bound() {
        let err = U::log().eval(-1.0).unwrap_err();
        assert!(err.to_string().contains("> 0"), "{err}");
        let err = U::neg_log_neg().eval(0.0).unwrap_err();
        assert!(err.to_string().contains("< 0"), "{err}");
        assert!(U::logistic(1.0).unwrap().inverse(1.0).is_err());
        assert!(U::cara(1.0).unwrap().inverse(-1.0).is_err());
    }

    #[test]
    fn derivative_matches_finite_differences() {
        for u in zoo() {
            for x in interior(&u) {
                let h = 1e-6 * x.abs().max(1.0);
                let fd = (u.eval(x + h).unwrap() - u.eval(x - h).unwrap()) / (2.0 * h);
                let d = u.deriv(x).unwrap();
                assert!((fd - d).abs() <= 1e-6 * d.abs().max(1.0), "{u} at {x}: {fd} vs {d}");
            }
        }
    }

    #[test]
    fn risk_aversion_matches_finite_differences() {
        for u in zoo() {
            for x in interior(&u) {
                let h = 1e-4 * x.abs().max(1.0);
                let d1 = |x: f64| u.deriv(x).unwrap();
                let d2 = (d1(x + h) - d1(x - h)) / (2.0 * h);
                let fd = -d2 / d1(x);
                let ra = u.risk_aversion(x).unwrap();
                assert!((fd - ra).abs() <= 1e-5 * ra.abs().max(1.0), "{u} at {x}: {fd} vs {ra}");
            }
        }
    }

    #[test]
    fn inverse_round_trips() {
        for u in zoo() {
            for x in interior(&u) {
                let back = u.inverse(u.eval(x).unwrap()).unwrap();
                assert!((back - x).abs() <= 1e-10 * x.abs().max(1.0), "{u} at {x}: {back}");
            }
        }
    }

    #[test]
    fn kt_bridge_is_smooth_at_the_seams() {
        let u = U::kahneman_tversky(0.5, 0.8, 0.05).unwrap();
        let b = u.bridge.unwrap();
        for (x, tail) in [(0.05f64, 1), (-0.05f64, -1)] {
            let exact = if tail > 0 { x.powf(0.5) } else { -(-x).powf(0.8) };
            assert_abs_diff_eq!(b.value(x), exact, epsilon = 1e-12);
            let h = 1e-9;
            let inside = x - tail as f64 * h;
            let outside = x + tail as f64 * h;
            assert_abs_diff_eq!(u.deriv(inside).unwrap(), u.deriv(outside).unwrap(), epsilon = 1e-5);
            assert_abs_diff_eq!(u.deriv2(inside).unwrap(), u.deriv2(outside).unwrap(), epsilon = 1e-2);
        }
    }

    #[test]
    fn logistic_shape() {
        let u = U::logistic(1.0).unwrap();
        assert!(u.risk_aversion(1.0).unwrap() > 0.0);
        assert!(u.risk_aversion(-1.0).unwrap() < 0.0);
        assert_eq!(u.risk_aversion(0.0).unwrap(), 0.0);
    }

    #[test]
    fn sahara_peaks_at_shift() {
        let u = U::sahara(1.0, 1.0, 0.5).unwrap();
        let peak = u.risk_aversion(0.5).unwrap();
        for x in [-2.0, 0.0, 0.4, 0.6, 3.0] {
            assert!(u.risk_aversion(x).unwrap() < peak);
        }
    }

    #[test]
    fn sahara_range_is_bounded_above_for_steep_alpha() {
        let u = U::sahara(2.0, 1.0, 0.0).unwrap();
        let (_, hi) = u.range();
        assert_abs_diff_eq!(hi, 2.0 / 3.0, epsilon = 1e-15);
        assert!(u.eval(1e6).unwrap() < hi);
    }

    #[test]
    fn table_of_predicates() {
        assert!(U::cara(-1.0).unwrap().satisfies_inada());
        assert!(!U::cara(1.0).unwrap().satisfies_inada());
        assert!(!U::identity().satisfies_inada());
        assert!(U::crra(0.5).unwrap().satisfies_inada());
        assert!(!U::crra(1.0).unwrap().satisfies_inada());
        assert!(U::logistic(3.0).unwrap().satisfies_inada());
        assert!(U::sahara(1.0, 1.0, 0.0).unwrap().satisfies_inada());
        assert!(!U::neg_log_neg().satisfies_inada());

        assert!(U::kahneman_tversky(0.5, 0.8, 0.05).unwrap().satisfies_star());
        assert!(!U::kahneman_tversky(0.8, 0.5, 0.05).unwrap().satisfies_star());
        assert!(U::cara(-0.1).unwrap().satisfies_star());
        assert!(!U::cara(0.0).unwrap().satisfies_star());
        assert!(U::crra(0.0).unwrap().satisfies_star());
        assert!(!U::crra(0.5).unwrap().satisfies_star());
        assert!(U::log().satisfies_star());
    }

    #[test]
    fn display_and_serde_round_trip() {
        let u = U::sahara(1.0, 2.0, -0.5).unwrap();
        assert_eq!(u.to_string(), "sahara:1,2,-0.5");
        let fam: Family<f64> = u.clone().into();
        assert_eq!(U::try_from(fam).unwrap(), u);
        assert!(U::try_from(Family::Logistic { alpha: -1.0 }).is_err());
    }
}
