use serde::{Deserialize, Serialize};

use super::{base_risk_measure, best_case, cara_meyer, mas_risk, worst_case, BenchmarkSet, MasMixture};
use crate::dist::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::orders::certainty_equivalent;
use crate::scalar::Scalar;
use crate::utility::ThresholdUtility;

/// A law-invariant risk functional on finitely supported payoffs.
pub trait RiskFunctional<T: Scalar>: Sync {
    fn risk(&self, x: &DiscreteDistribution<T>) -> Result<T>;
}

impl<T, F> RiskFunctional<T> for F
where
    T: Scalar,
    F: Fn(&DiscreteDistribution<T>) -> Result<T> + Sync,
{
    fn risk(&self, x: &DiscreteDistribution<T>) -> Result<T> {
        self(x)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct WorstCase;

impl<T: Scalar> RiskFunctional<T> for WorstCase {
    fn risk(&self, x: &DiscreteDistribution<T>) -> Result<T> {
        Ok(worst_case(x))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BestCase;

impl<T: Scalar> RiskFunctional<T> for BestCase {
    fn risk(&self, x: &DiscreteDistribution<T>) -> Result<T> {
        Ok(best_case(x))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ExpectedShortfall<T> {
    pub p: T,
}

impl<T: Scalar> RiskFunctional<T> for ExpectedShortfall<T> {
    fn risk(&self, x: &DiscreteDistribution<T>) -> Result<T> {
        x.es(self.p)
    }
}

#[derive(Debug, Clone)]
pub struct CaraMeyer<T> {
    pub c: T,
    pub bench: BenchmarkSet<T>,
}

impl<T: Scalar> RiskFunctional<T> for CaraMeyer<T> {
    fn risk(&self, x: &DiscreteDistribution<T>) -> Result<T> {
        Ok(cara_meyer(x, self.c, &self.bench))
    }
}

/// `-K_u(X)`.
#[derive(Debug, Clone)]
pub struct CertaintyEquivalentRisk<T> {
    pub u: ThresholdUtility<T>,
}

impl<T: Scalar> RiskFunctional<T> for CertaintyEquivalentRisk<T> {
    fn risk(&self, x: &DiscreteDistribution<T>) -> Result<T> {
        Ok(-certainty_equivalent(x, &self.u)?)
    }
}

#[derive(Debug, Clone)]
pub struct MasRisk<T> {
    pub mix: MasMixture<T>,
}

impl<T: Scalar> RiskFunctional<T> for MasRisk<T> {
    fn risk(&self, x: &DiscreteDistribution<T>) -> Result<T> {
        Ok(mas_risk(x, &self.mix))
    }
}

#[derive(Debug, Clone)]
pub struct BaseRisk<T> {
    pub z: DiscreteDistribution<T>,
    pub v: ThresholdUtility<T>,
    pub tol: T,
}

impl<T: Scalar> RiskFunctional<T> for BaseRisk<T> {
    fn risk(&self, x: &DiscreteDistribution<T>) -> Result<T> {
        base_risk_measure(&self.z, &self.v, x, self.tol)
    }
}

fn require_positive<T: Scalar>(x: &DiscreteDistribution<T>) -> Result<()> {
    if x.min() > T::zero() {
        Ok(())
    } else {
        Err(Error::NonPositiveAtom(x.min().to_f64_lossy()))
    }
}

/// Return risk measure `exp(ρ(log X))` of a strictly positive payoff.
pub fn rrm_eta<T: Scalar, R: RiskFunctional<T> + ?Sized>(rho: &R, x: &DiscreteDistribution<T>) -> Result<T> {
    require_positive(x)?;
    Ok(rho.risk(&x.transform(|v| Ok(v.ln()))?)?.exp())
}

/// Loss-based return risk measure `exp(ρ(-log L))` of a strictly positive loss.
pub fn rrm_kappa<T: Scalar, R: RiskFunctional<T> + ?Sized>(rho: &R, l: &DiscreteDistribution<T>) -> Result<T> {
    require_positive(l)?;
    Ok(rho.risk(&l.transform(|v| Ok(-v.ln()))?)?.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Constant,
    Increasing,
    Decreasing,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticSlope<T> {
    /// `ρ(n_max X) / n_max`.
    pub slope: T,
    /// `ρ(nX) / n` for `n = 1..=n_max`.
    pub sequence: Vec<T>,
    pub monotonicity: Monotonicity,
}

/// Tracks `ρ(nX)/n` for `n = 1..=n_max` as an estimate of `lim ρ(nX)/n`.
pub fn asymptotic_slope<T: Scalar, R: RiskFunctional<T> + ?Sized>(
    rho: &R,
    x: &DiscreteDistribution<T>,
    n_max: usize,
) -> Result<AsymptoticSlope<T>> {
    if n_max < 2 {
        return Err(Error::InvalidParameter(format!("n_max must be at least 2, got {n_max}")));
    }
    let sequence = (1..=n_max)
        .map(|n| {
            let nf = T::lit(n as f64);
            Ok(rho.risk(&x.scale_by(nf)?)? / nf)
        })
        .collect::<Result<Vec<T>>>()?;
    let tol = T::tol(1e-12) * sequence.iter().fold(T::one(), |m, v| m.max(v.abs()));
    let (mut up, mut down) = (false, false);
    for w in sequence.windows(2) {
        if w[1] > w[0] + tol {
            up = true;
        } else if w[1] < w[0] - tol {
            down = true;
        }
    }
    let monotonicity = match (up, down) {
        (false, false) => Monotonicity::Constant,
        (true, false) => Monotonicity::Increasing,
        (false, true) => Monotonicity::Decreasing,
        (true, true) => Monotonicity::Mixed,
    };
    Ok(AsymptoticSlope { slope: sequence[n_max - 1], sequence, monotonicity })
}
