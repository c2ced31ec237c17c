//! Monetary risk measures: worst/best case, Expected Shortfall, CARA
//! certainty equivalents and their mixtures, base risk measures and the
//! CARA-Meyer representation over finite benchmark sets.

mod base;
mod cara;
mod functional;

use serde::{Deserialize, Serialize};

use crate::dist::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::scalar::{log_sum_exp, Scalar};

pub use base::{base_risk_measure, DEFAULT_TOL};
pub use cara::{c_max, cara_meyer, cara_meyer_curve, cara_meyer_detail, BenchmarkSet, CMax, CaraMeyerValue};
pub use functional::{
    asymptotic_slope, rrm_eta, rrm_kappa, AsymptoticSlope, BaseRisk, BestCase, CaraMeyer, CertaintyEquivalentRisk,
    ExpectedShortfall, MasRisk, Monotonicity, RiskFunctional, WorstCase,
};

/// `ρ^w(X) = -min X`.
pub fn worst_case<T: Scalar>(x: &DiscreteDistribution<T>) -> T {
    -x.min()
}

/// `ρ^b(X) = -max X`.
pub fn best_case<T: Scalar>(x: &DiscreteDistribution<T>) -> T {
    -x.max()
}

/// CARA certainty equivalent `K_c(X) = (1/c) log E[e^{cX}]`, extended by the
/// mean at `c = 0`, the minimum at `c = -∞` and the maximum at `c = +∞`.
pub fn k_c<T: Scalar>(x: &DiscreteDistribution<T>, c: T) -> T {
    if c == T::neg_infinity() {
        x.min()
    } else if c == T::infinity() {
        x.max()
    } else if c == T::zero() {
        x.mean()
    } else {
        let k = log_sum_exp(x.atoms().iter().map(|a| (a.prob, c * a.value))) / c;
        k.max(x.min()).min(x.max())
    }
}

/// Discrete mixing measure over CARA coefficients in `[-∞, ∞]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(T, T)>", into = "Vec<(T, T)>")]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct MasMixture<T> {
    weights: Vec<(T, T)>,
}

impl<T: Scalar> MasMixture<T> {
    /// `(c, mass)` pairs; masses positive and summing to one, `c` distinct.
    pub fn new(weights: Vec<(T, T)>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter("mixture needs at least one coefficient".into()));
        }
        let mut total = T::zero();
        for (i, &(c, m)) in weights.iter().enumerate() {
            if c.is_nan() {
                return Err(Error::InvalidParameter("mixture coefficient is NaN".into()));
            }
            if !(m > T::zero()) || !m.is_finite() {
                return Err(Error::InvalidProbability(m.to_f64_lossy()));
            }
            if weights[..i].iter().any(|&(d, _)| d == c) {
                return Err(Error::InvalidParameter(format!("duplicate mixture coefficient {c}")));
            }
            total = total + m;
        }
        if (total - T::one()).abs() > T::tol(1e-12) {
            return Err(Error::ProbabilitySum(total.to_f64_lossy()));
        }
        Ok(Self { weights })
    }

    pub fn point(c: T) -> Self {
        Self { weights: vec![(c, T::one())] }
    }

    pub fn weights(&self) -> &[(T, T)] {
        &self.weights
    }
}

impl<T: Scalar> TryFrom<Vec<(T, T)>> for MasMixture<T> {
    type Error = Error;

    fn try_from(w: Vec<(T, T)>) -> Result<Self> {
        Self::new(w)
    }
}

impl<T: Scalar> From<MasMixture<T>> for Vec<(T, T)> {
    fn from(m: MasMixture<T>) -> Self {
        m.weights
    }
}

/// Monotone additive statistic `Σ mass_j K_{c_j}(X)`.
pub fn mas<T: Scalar>(x: &DiscreteDistribution<T>, mix: &MasMixture<T>) -> T {
    mix.weights.iter().map(|&(c, m)| m * k_c(x, c)).sum()
}

/// `-mas(X)`.
pub fn mas_risk<T: Scalar>(x: &DiscreteDistribution<T>, mix: &MasMixture<T>) -> T {
    -mas(x, mix)
}
