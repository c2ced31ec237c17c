//! Closed-form risk minimisation for SSD-consistent loss-based return risk
//! measures under a budget constraint `E_Q[L] ≥ x0`.
//!
//! All functions of the uniform variable `U` are right-continuous step
//! functions on `[0, 1)`. For a concave `ĝ(p) = (1-p) g(p)` with `ĝ(1) = 0`,
//! the optimal loss is `L* = -κ* ĝ'₋(U)` with `κ* = x0 / ∫ g dμ`, where
//! `φ([0, t]) = q_{dQ/dP}(t)` and `dμ/dφ = 1 - t`.

use serde::{Deserialize, Serialize};

use crate::dist::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Right-continuous step function on `[0, 1)`: `values[j]` on `[knots[j], knots[j+1])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStep<T>", into = "RawStep<T>")]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct StepFunction<T> {
    knots: Vec<T>,
    values: Vec<T>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawStep<T> {
    knots: Vec<T>,
    values: Vec<T>,
}

impl<T: Scalar> TryFrom<RawStep<T>> for StepFunction<T> {
    type Error = Error;

    fn try_from(r: RawStep<T>) -> Result<Self> {
        Self::new(r.knots, r.values)
    }
}

impl<T: Scalar> From<StepFunction<T>> for RawStep<T> {
    fn from(s: StepFunction<T>) -> Self {
        RawStep { knots: s.knots, values: s.values }
    }
}

impl<T: Scalar> StepFunction<T> {
    /// Knots must start at 0, increase strictly and stay below 1.
    pub fn new(knots: Vec<T>, values: Vec<T>) -> Result<Self> {
        if knots.is_empty() || knots.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "step function needs matching nonempty knots and values ({} vs {})",
                knots.len(),
                values.len()
            )));
        }
        if knots[0] != T::zero() {
            return Err(Error::InvalidParameter(format!("first knot must be 0, got {}", knots[0])));
        }
        for w in knots.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidParameter(format!("knots must increase strictly ({} then {})", w[0], w[1])));
            }
        }
        if let Some(&k) = knots.last().filter(|&&k| !(k < T::one())) {
            return Err(Error::InvalidParameter(format!("knots must lie in [0, 1), got {k}")));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(v.to_f64_lossy()));
        }
        Ok(Self { knots, values })
    }

    pub fn constant(value: T) -> Self {
        Self { knots: vec![T::zero()], values: vec![value] }
    }

    /// Quantile function of `d`, i.e. the law of `q_d(U)`.
    pub fn from_quantile(d: &DiscreteDistribution<T>) -> Self {
        let mut knots = Vec::with_capacity(d.len());
        let mut values = Vec::with_capacity(d.len());
        let mut cum = T::zero();
        for a in d.atoms() {
            knots.push(cum);
            values.push(a.value);
            cum = cum + a.prob;
        }
        Self { knots, values }
    }

    pub fn knots(&self) -> &[T] {
        &self.knots
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// `(start, end, value)` for every piece.
    pub fn pieces(&self) -> impl Iterator<Item = (T, T, T)> + '_ {
        (0..self.knots.len()).map(move |j| {
            let end = self.knots.get(j + 1).copied().unwrap_or(T::one());
            (self.knots[j], end, self.values[j])
        })
    }

    pub fn eval(&self, u: T) -> T {
        let idx = self.knots.partition_point(|&k| k <= u);
        self.values[idx.max(1) - 1]
    }

    pub fn integral(&self) -> T {
        self.pieces().map(|(a, b, v)| (b - a) * v).sum()
    }

    /// `∫_0^1 f(u) g(u) du` over the merged grid.
    pub fn integral_product(&self, other: &Self) -> T {
        let mut grid: Vec<T> = self.knots.iter().chain(other.knots.iter()).copied().collect();
        grid.sort_by(|a, b| a.partial_cmp(b).expect("finite knots"));
        grid.dedup();
        grid.push(T::one());
        grid.windows(2).map(|w| (w[1] - w[0]) * self.eval(w[0]) * other.eval(w[0])).sum()
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] >= w[0])
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self { knots: self.knots.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// Law of the step function under the uniform measure.
    pub fn law(&self) -> Result<DiscreteDistribution<T>> {
        DiscreteDistribution::new(self.pieces().map(|(a, b, v)| (v, b - a)))
    }

    /// Nondecreasing rearrangement, i.e. the quantile function of [`Self::law`].
    pub fn increasing_rearrangement(&self) -> Result<Self> {
        Ok(Self::from_quantile(&self.law()?))
    }
}

/// Right-continuous quantile function of the pricing density `dQ/dP`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StepFunction<T>", into = "StepFunction<T>")]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct PricingQuantile<T> {
    q: StepFunction<T>,
}

impl<T: Scalar> TryFrom<StepFunction<T>> for PricingQuantile<T> {
    type Error = Error;

    fn try_from(q: StepFunction<T>) -> Result<Self> {
        Self::new(q)
    }
}

impl<T: Scalar> From<PricingQuantile<T>> for StepFunction<T> {
    fn from(p: PricingQuantile<T>) -> Self {
        p.q
    }
}

impl<T: Scalar> PricingQuantile<T> {
    /// Heights must be positive and nondecreasing with unit integral.
    pub fn new(q: StepFunction<T>) -> Result<Self> {
        if let Some(v) = q.values.iter().find(|&&v| !(v > T::zero())) {
            return Err(Error::InvalidParameter(format!("pricing density heights must be positive, got {v}")));
        }
        if !q.is_nondecreasing() {
            return Err(Error::InvalidParameter("pricing quantile must be nondecreasing".into()));
        }
        let total = q.integral();
        if (total - T::one()).abs() > T::tol(1e-10) {
            return Err(Error::InvalidParameter(format!("pricing density must integrate to 1, got {total}")));
        }
        Ok(Self { q })
    }

    /// `Q = P`.
    pub fn uniform() -> Self {
        Self { q: StepFunction::constant(T::one()) }
    }

    pub fn quantile(&self) -> &StepFunction<T> {
        &self.q
    }

    /// `E_Q[L] = ∫ L(u) q(u) du` for a loss given as a function of `U`.
    pub fn expectation(&self, l: &StepFunction<T>) -> T {
        l.integral_product(&self.q)
    }
}

/// Finite atomic measure on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMeasure<T> {
    pub atoms: Vec<(T, T)>,
}

impl<T: Scalar> GridMeasure<T> {
    pub fn total_mass(&self) -> T {
        self.atoms.iter().map(|&(_, m)| m).sum()
    }

    pub fn integrate(&self, f: impl Fn(T) -> T) -> T {
        self.atoms.iter().map(|&(t, m)| m * f(t)).sum()
    }
}

/// `φ` with `φ([0, t]) = q(t)`: an atom `q(0)` at 0 plus every jump of `q`.
pub fn build_phi<T: Scalar>(pricing: &PricingQuantile<T>) -> GridMeasure<T> {
    let q = &pricing.q;
    let mut atoms = vec![(T::zero(), q.values[0])];
    for j in 1..q.knots.len() {
        let jump = q.values[j] - q.values[j - 1];
        if jump > T::zero() {
            atoms.push((q.knots[j], jump));
        }
    }
    GridMeasure { atoms }
}

/// `μ` with `dμ/dφ(t) = 1 - t`.
pub fn build_mu<T: Scalar>(pricing: &PricingQuantile<T>) -> GridMeasure<T> {
    GridMeasure { atoms: build_phi(pricing).atoms.into_iter().map(|(t, m)| (t, m * (T::one() - t))).collect() }
}

/// A nondecreasing positive `g` with concave `ĝ(p) = (1-p) g(p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawG<T>", into = "RawG<T>")]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub enum GFunction<T> {
    /// `g(p) = ES_p(-L')` for a benchmark loss with positive atoms.
    BenchmarkEs(DiscreteDistribution<T>),
    /// Knots `(p_k, g(p_k))` with `p_0 = 0 < p_1 < ... < 1`; `ĝ` is
    /// interpolated linearly between `(p_k, (1-p_k) g_k)` and `(1, 0)`.
    Tabulated(Vec<(T, T)>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawG<T> {
    BenchmarkEs(Vec<(T, T)>),
    Tabulated(Vec<(T, T)>),
}

impl<T: Scalar> TryFrom<RawG<T>> for GFunction<T> {
    type Error = Error;

    fn try_from(r: RawG<T>) -> Result<Self> {
        match r {
            RawG::BenchmarkEs(atoms) => Self::benchmark_es(DiscreteDistribution::new(atoms)?),
            RawG::Tabulated(knots) => Self::tabulated(knots),
        }
    }
}

impl<T: Scalar> From<GFunction<T>> for RawG<T> {
    fn from(g: GFunction<T>) -> Self {
        match g {
            GFunction::BenchmarkEs(d) => RawG::BenchmarkEs(d.into()),
            GFunction::Tabulated(k) => RawG::Tabulated(k),
        }
    }
}

impl<T: Scalar> GFunction<T> {
    pub fn benchmark_es(l: DiscreteDistribution<T>) -> Result<Self> {
        if !(l.min() > T::zero()) {
            return Err(Error::InvalidGFamily(format!("benchmark loss needs positive atoms, got {}", l.min())));
        }
        Ok(Self::BenchmarkEs(l))
    }

    pub fn tabulated(knots: Vec<(T, T)>) -> Result<Self> {
        let g = Self::Tabulated(knots);
        g.validate_tabulated()?;
        Ok(g)
    }

    fn validate_tabulated(&self) -> Result<()> {
        let Self::Tabulated(knots) = self else { return Ok(()) };
        let bad = |msg: String| Err(Error::InvalidGFamily(msg));
        if knots.is_empty() || knots[0].0 != T::zero() {
            return bad("tabulated g needs a first knot at p = 0".into());
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) {
                return bad(format!("knots must increase strictly in p ({} then {})", w[0].0, w[1].0));
            }
            if w[1].1 < w[0].1 {
                return bad(format!("g must be nondecreasing ({} then {})", w[0].1, w[1].1));
            }
        }
        for &(p, gp) in knots {
            if !(p < T::one()) {
                return bad(format!("knot level {p} must be below 1"));
            }
            if !(gp > T::zero()) || !gp.is_finite() {
                return bad(format!("g must be positive, got {gp} at {p}"));
            }
        }
        let slopes = self.hat_slopes();
        let tol = T::tol(1e-12) * slopes.iter().fold(T::one(), |m, s| m.max(s.abs()));
        for w in slopes.windows(2) {
            if w[1] > w[0] + tol {
                return bad("ĝ(p) = (1 - p) g(p) must be concave".into());
            }
        }
        if slopes.iter().any(|&s| !(s < T::zero())) {
            return bad("ĝ must be strictly decreasing".into());
        }
        Ok(())
    }

    /// Breakpoints of `ĝ` in `[0, 1)`, ascending, starting at 0.
    pub fn knots(&self) -> Vec<T> {
        match self {
            Self::BenchmarkEs(l) => StepFunction::from_quantile(l).knots,
            Self::Tabulated(k) => k.iter().map(|&(p, _)| p).collect(),
        }
    }

    /// Slopes of `ĝ` on the pieces starting at [`Self::knots`].
    fn hat_slopes(&self) -> Vec<T> {
        match self {
            Self::BenchmarkEs(l) => l.values().map(|v| -v).collect(),
            Self::Tabulated(k) => {
                let one = T::one();
                let mut pts: Vec<(T, T)> = k.iter().map(|&(p, g)| (p, (one - p) * g)).collect();
                pts.push((one, T::zero()));
                pts.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect()
            }
        }
    }

    /// `u ↦ ĝ'₋(u)` as a step function of `U`.
    pub fn hat_derivative(&self) -> StepFunction<T> {
        StepFunction { knots: self.knots(), values: self.hat_slopes() }
    }

    /// `ĝ(p) = ∫_p^1 -ĝ'₋(u) du`.
    pub fn hat(&self, p: T) -> T {
        let d = self.hat_derivative();
        d.pieces().filter(|&(_, b, _)| b > p).map(|(a, b, s)| -(b - a.max(p)) * s).sum()
    }

    /// `g(p)`, with `g(1) = -ĝ'₋(1)`.
    pub fn eval(&self, p: T) -> T {
        if p >= T::one() {
            return -*self.hat_slopes().last().expect("nonempty slopes");
        }
        self.hat(p) / (T::one() - p)
    }

    /// Lower bound of `-ĝ'₋`, which must stay away from zero.
    fn min_loss(&self) -> T {
        self.hat_slopes().iter().fold(T::infinity(), |m, &s| m.min(-s))
    }
}

/// `∫ g dμ = Σ mass_j g(t_j)`.
pub fn integral_g_mu<T: Scalar>(g: &GFunction<T>, mu: &GridMeasure<T>) -> T {
    mu.integrate(|t| g.eval(t))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct RiskMinSolution<T> {
    pub kappa_star: T,
    /// Index of the optimal `g` within its family.
    pub g_index: usize,
    /// `∫ g dμ` for each family member.
    pub integrals: Vec<T>,
    /// Optimal loss `L*(u) = -κ* ĝ'₋(u)` as a function of `U`.
    pub l_star: StepFunction<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct RiskMinInstance<T> {
    #[serde(default = "PricingQuantile::uniform")]
    pub pricing: PricingQuantile<T>,
    pub x0: T,
    pub family: Vec<GFunction<T>>,
}

fn check_x0<T: Scalar>(x0: T) -> Result<()> {
    if x0 > T::zero() && x0.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("budget x0 must be positive, got {x0}")))
    }
}

fn check_denominator<T: Scalar>(g: &GFunction<T>, denom: T) -> Result<()> {
    if !(denom > T::zero()) || !denom.is_finite() {
        return Err(Error::InvalidGFamily(format!("∫ g dμ = {denom} is not positive")));
    }
    if !(g.min_loss() > T::zero()) {
        return Err(Error::InvalidGFamily("ĝ'₋ must be bounded away from 0".into()));
    }
    Ok(())
}

/// Optimal value and loss for a single `g`.
pub fn solve_single<T: Scalar>(g: &GFunction<T>, pricing: &PricingQuantile<T>, x0: T) -> Result<RiskMinSolution<T>> {
    check_x0(x0)?;
    let denom = integral_g_mu(g, &build_mu(pricing));
    check_denominator(g, denom)?;
    let kappa_star = x0 / denom;
    let l_star = g.hat_derivative().map(|s| -kappa_star * s);
    Ok(RiskMinSolution { kappa_star, g_index: 0, integrals: vec![denom], l_star })
}

/// Solves over a finite family by maximising `∫ g dμ` (lowest index on ties).
pub fn solve_family<T: Scalar>(inst: &RiskMinInstance<T>) -> Result<RiskMinSolution<T>> {
    if inst.family.is_empty() {
        return Err(Error::InvalidGFamily("family is empty".into()));
    }
    check_x0(inst.x0)?;
    let mu = build_mu(&inst.pricing);
    let integrals: Vec<T> = inst.family.iter().map(|g| integral_g_mu(g, &mu)).collect();
    for (g, &d) in inst.family.iter().zip(&integrals) {
        check_denominator(g, d)?;
    }
    let mut best = 0;
    for (i, &v) in integrals.iter().enumerate() {
        if v > integrals[best] {
            best = i;
        }
    }
    let mut sol = solve_single(&inst.family[best], &inst.pricing, inst.x0)?;
    sol.g_index = best;
    sol.integrals = integrals;
    Ok(sol)
}

/// `κ_g(L) = sup_p ES_p(-L) / g(p)` for a loss given by its quantile function.
///
/// Numerator and denominator are linear between the merged knots, so the
/// ratio is monotone there; the supremum is attained at a knot or in the
/// limit `p → 1`, where it equals `q_L(1-) / g(1)`.
pub fn kappa_g<T: Scalar>(g: &GFunction<T>, l_quantile: &StepFunction<T>) -> Result<T> {
    if !l_quantile.is_nondecreasing() {
        return Err(Error::InvalidParameter("loss must be given by a nondecreasing quantile function".into()));
    }
    if !(l_quantile.values[0] > T::zero()) {
        return Err(Error::NonPositiveAtom(l_quantile.values[0].to_f64_lossy()));
    }
    let upper =
        |p: T| -> T { l_quantile.pieces().filter(|&(_, b, _)| b > p).map(|(a, b, v)| (b - a.max(p)) * v).sum() };
    let mut levels: Vec<T> = l_quantile.knots.iter().copied().chain(g.knots()).collect();
    levels.sort_by(|a, b| a.partial_cmp(b).expect("finite knots"));
    levels.dedup();
    let mut best = *l_quantile.values.last().expect("nonempty") / g.eval(T::one());
    for p in levels {
        best = best.max(upper(p) / g.hat(p));
    }
    Ok(best)
}

/// Both sides of the Hardy–Littlewood inequality
/// `∫ q_L(u) q_{dQ/dP}(u) du ≥ E_Q[L]` for `L` given as a function of `U`.
pub fn verify_hl<T: Scalar>(l: &StepFunction<T>, pricing: &PricingQuantile<T>) -> Result<(T, T)> {
    let lhs = l.increasing_rearrangement()?.integral_product(&pricing.q);
    let rhs = pricing.expectation(l);
    Ok((lhs, rhs))
}
