use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{DiscreteDistribution, MergedSteps};
use crate::error::{Error, Result};
use crate::root::bisect_threshold;
use crate::scalar::Scalar;

/// Nonempty labelled set of benchmark payoffs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct BenchmarkSet<T> {
    labels: Vec<String>,
    benchmarks: Vec<DiscreteDistribution<T>>,
}

impl<T: Scalar> BenchmarkSet<T> {
    pub fn new(items: Vec<(String, DiscreteDistribution<T>)>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::InvalidParameter("benchmark set is empty".into()));
        }
        let (labels, benchmarks) = items.into_iter().unzip();
        Ok(Self { labels, benchmarks })
    }

    /// Benchmarks labelled `Y1, Y2, ...`.
    pub fn unlabeled(benchmarks: Vec<DiscreteDistribution<T>>) -> Result<Self> {
        Self::new(benchmarks.into_iter().enumerate().map(|(i, b)| (format!("Y{}", i + 1), b)).collect())
    }

    pub fn single(benchmark: DiscreteDistribution<T>) -> Self {
        Self { labels: vec!["Y1".into()], benchmarks: vec![benchmark] }
    }

    pub fn len(&self) -> usize {
        self.benchmarks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.benchmarks.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn benchmarks(&self) -> &[DiscreteDistribution<T>] {
        &self.benchmarks
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &DiscreteDistribution<T>)> {
        self.labels.iter().map(String::as_str).zip(self.benchmarks.iter())
    }
}

/// `ρ_c(X)` together with the value attained for every benchmark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaraMeyerValue<T> {
    pub c: T,
    pub value: T,
    /// Index of the benchmark attaining the minimum (lowest index on ties).
    pub argmin: usize,
    pub per_benchmark: Vec<T>,
}

fn log_add_exp<T: Scalar>(a: T, b: T) -> T {
    if a == T::neg_infinity() {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Smallest capital `m` with `Y ≤_{e_c-SD} X + m`.
///
/// With `H_X(a)` the integral of `e^{c q_X}` over `[0, a]`, this is
/// `sup_a (log H_Y(a) - log H_X(a)) / c` for `c ≠ 0` and
/// `sup_p ES_p(X) - ES_p(Y)` for `c = 0`. Both objectives are monotone
/// between merged kinks, so the supremum is taken over the kinks and the
/// limit `a → 0`, which equals `min Y - min X`.
pub(crate) fn cara_single<T: Scalar>(x: &DiscreteDistribution<T>, y: &DiscreteDistribution<T>, c: T) -> T {
    let mut best = y.min() - x.min();
    let mut a = T::zero();
    if c == T::zero() {
        let (mut gx, mut gy) = (T::zero(), T::zero());
        for (w, qx, qy) in MergedSteps::new(x, y) {
            a = a + w;
            gx = gx + w * qx;
            gy = gy + w * qy;
            best = best.max((gy - gx) / a);
        }
    } else if c.abs() * x.scale().max(y.scale()) <= T::one() {
        // Small exponents: track H(a) - a through expm1 so that the ratio
        // keeps full relative precision as c approaches zero.
        let (mut sx, mut sy) = (T::zero(), T::zero());
        for (w, qx, qy) in MergedSteps::new(x, y) {
            a = a + w;
            sx = sx + w * (c * qx).exp_m1();
            sy = sy + w * (c * qy).exp_m1();
            best = best.max(((sy / a).ln_1p() - (sx / a).ln_1p()) / c);
        }
    } else {
        let (mut lx, mut ly) = (T::neg_infinity(), T::neg_infinity());
        for (w, qx, qy) in MergedSteps::new(x, y) {
            if w <= T::zero() {
                continue;
            }
            let lw = w.ln();
            lx = log_add_exp(lx, lw + c * qx);
            ly = log_add_exp(ly, lw + c * qy);
            best = best.max((ly - lx) / c);
        }
    }
    best
}

/// `ρ_c(X) = min_i inf{m : Y_i ≤_{e_c-SD} X + m}` with every term computed exactly.
pub fn cara_meyer_detail<T: Scalar>(x: &DiscreteDistribution<T>, c: T, bench: &BenchmarkSet<T>) -> CaraMeyerValue<T> {
    let per_benchmark: Vec<T> = bench.benchmarks.iter().map(|y| cara_single(x, y, c)).collect();
    let (argmin, value) =
        per_benchmark
            .iter()
            .enumerate()
            .fold((0, T::infinity()), |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) });
    CaraMeyerValue { c, value, argmin, per_benchmark }
}

/// The CARA-Meyer risk measure of `X` at risk aversion `-c` for a finite benchmark set.
pub fn cara_meyer<T: Scalar>(x: &DiscreteDistribution<T>, c: T, bench: &BenchmarkSet<T>) -> T {
    cara_meyer_detail(x, c, bench).value
}

/// [`cara_meyer_detail`] over a grid of `c`, evaluated in parallel.
pub fn cara_meyer_curve<T: Scalar>(
    x: &DiscreteDistribution<T>,
    bench: &BenchmarkSet<T>,
    c_grid: &[T],
) -> Vec<CaraMeyerValue<T>> {
    c_grid.par_iter().map(|&c| cara_meyer_detail(x, c, bench)).collect()
}

/// Root of `c ↦ ρ_c(X)` for a single benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CMax<T> {
    /// Smallest `c` in the bracket with `ρ_c(X) ≥ 0`, if the curve changes sign.
    pub root: Option<T>,
    /// Set when the curve vanishes identically on the bracket.
    pub degenerate: bool,
}

/// Locates where the nondecreasing curve `c ↦ ρ_c(X)` with benchmark `Y`
/// crosses zero on `[c_lo, c_hi]`, by bisection to width `tol`.
pub fn c_max<T: Scalar>(
    x: &DiscreteDistribution<T>,
    y: &DiscreteDistribution<T>,
    c_lo: T,
    c_hi: T,
    tol: T,
) -> Result<CMax<T>> {
    if !(c_lo < c_hi) || !c_lo.is_finite() || !c_hi.is_finite() {
        return Err(Error::InvalidParameter(format!("bracket [{c_lo}, {c_hi}] is not ordered")));
    }
    if !(tol > T::zero()) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let phi = |c: T| cara_single(x, y, c);
    let zero_tol = T::tol(1e-12) * x.scale().max(y.scale());
    let (lo, hi) = (phi(c_lo), phi(c_hi));
    if lo.abs() <= zero_tol {
        return Ok(CMax { root: Some(c_lo), degenerate: hi.abs() <= zero_tol });
    }
    if lo > T::zero() || hi < T::zero() {
        return Ok(CMax { root: None, degenerate: false });
    }
    let root = bisect_threshold(|c| Ok(phi(c) >= T::zero()), c_lo, c_hi, tol)?;
    Ok(CMax { root: Some(root), degenerate: false })
}
