//! Finitely supported distributions with exact quantile and Expected
//! Shortfall machinery.
//!
//! Expected Shortfall at level `p` is
//! `ES_p(X) = -(1/(1-p)) * ∫_0^{1-p} q_X(r) dr` for `p < 1` and `-min X` at `p = 1`,
//! where `q_X` is the lower quantile. For a discrete law the integral
//! `G(a) = ∫_0^a q_X(r) dr` is piecewise linear with kinks at the cumulative
//! probabilities, so every quantity below is computed exactly from those kinks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative tolerance for merging atoms with (numerically) equal values.
const MERGE_TOL: f64 = 1e-12;
/// Tolerance on the total probability mass.
const MASS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom<T> {
    pub value: T,
    pub prob: T,
}

/// A probability law with finitely many atoms, sorted by value.
///
/// Values are strictly increasing (duplicates are merged on construction),
/// every probability is positive, and the probabilities sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(T, T)>", into = "Vec<(T, T)>")]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct DiscreteDistribution<T> {
    atoms: Vec<Atom<T>>,
}

impl<T: Scalar> TryFrom<Vec<(T, T)>> for DiscreteDistribution<T> {
    type Error = Error;

    fn try_from(atoms: Vec<(T, T)>) -> Result<Self> {
        Self::new(atoms)
    }
}

impl<T: Scalar> From<DiscreteDistribution<T>> for Vec<(T, T)> {
    fn from(d: DiscreteDistribution<T>) -> Self {
        d.atoms.into_iter().map(|a| (a.value, a.prob)).collect()
    }
}

fn same_value<T: Scalar>(a: T, b: T) -> bool {
    (a - b).abs() <= T::tol(MERGE_TOL) * T::one().max(a.abs()).max(b.abs())
}

impl<T: Scalar> DiscreteDistribution<T> {
    /// Builds a distribution from `(value, probability)` pairs.
    pub fn new(atoms: impl IntoIterator<Item = (T, T)>) -> Result<Self> {
        let mut raw: Vec<Atom<T>> = Vec::new();
        for (value, prob) in atoms {
            if !value.is_finite() {
                return Err(Error::NonFinite(value.to_f64_lossy()));
            }
            if !prob.is_finite() || prob <= T::zero() || prob > T::one() + T::tol(MASS_TOL) {
                return Err(Error::InvalidProbability(prob.to_f64_lossy()));
            }
            raw.push(Atom { value, prob });
        }
        if raw.is_empty() {
            return Err(Error::EmptySample);
        }
        let total: T = raw.iter().map(|a| a.prob).sum();
        if (total - T::one()).abs() > T::tol(MASS_TOL) * T::lit(raw.len().max(1) as f64).sqrt() {
            return Err(Error::ProbabilitySum(total.to_f64_lossy()));
        }
        raw.sort_by(|a, b| a.value.partial_cmp(&b.value).expect("finite values"));
        let mut atoms: Vec<Atom<T>> = Vec::with_capacity(raw.len());
        for a in raw {
            match atoms.last_mut() {
                Some(last) if same_value(last.value, a.value) => last.prob = last.prob + a.prob,
                _ => atoms.push(a),
            }
        }
        for a in &mut atoms {
            a.prob = a.prob / total;
        }
        Ok(Self { atoms })
    }

    /// Empirical law of `samples`, each sample carrying weight `1/n`.
    pub fn from_samples(samples: &[T]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySample);
        }
        let w = T::one() / T::lit(samples.len() as f64);
        Self::new(samples.iter().map(|&x| (x, w)))
    }

    pub fn point_mass(value: T) -> Result<Self> {
        Self::new([(value, T::one())])
    }

    /// Two-point law with `P(high) = p`, `P(low) = 1 - p`.
    pub fn two_point(low: T, high: T, p: T) -> Result<Self> {
        if !(p > T::zero() && p < T::one()) {
            return Err(Error::LevelOutOfRange { level: p.to_f64_lossy(), range: "(0, 1)" });
        }
        Self::new([(low, T::one() - p), (high, p)])
    }

    /// Mean-preserving spread around `center`: the value
    /// `center + 2(1-p)s` with probability `p` and `center - 2ps` with
    /// probability `1-p`. The two atoms are `2s` apart and the mean is `center`;
    /// for `p = 1/2` this is `center ± s` with equal weights.
    pub fn mean_preserving_spread(center: T, spread: T, p: T) -> Result<Self> {
        if !(spread > T::zero()) || !spread.is_finite() {
            return Err(Error::InvalidParameter(format!("spread must be positive, got {spread}")));
        }
        let two = T::two();
        Self::two_point(center - two * p * spread, center + two * (T::one() - p) * spread, p)
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = T> + '_ {
        self.atoms.iter().map(|a| a.value)
    }

    pub fn is_degenerate(&self) -> bool {
        self.atoms.len() == 1
    }

    pub fn mean(&self) -> T {
        self.atoms.iter().map(|a| a.value * a.prob).sum()
    }

    pub fn min(&self) -> T {
        self.atoms[0].value
    }

    pub fn max(&self) -> T {
        self.atoms[self.atoms.len() - 1].value
    }

    /// Largest absolute atom value, at least one.
    pub fn scale(&self) -> T {
        T::one().max(self.min().abs()).max(self.max().abs())
    }

    pub fn cdf(&self, x: T) -> T {
        self.atoms.iter().take_while(|a| a.value <= x).map(|a| a.prob).sum()
    }

    /// Lower quantile `inf { x : F(x) >= r }` for `r` in `(0, 1]`.
    pub fn quantile(&self, r: T) -> Result<T> {
        if !(r > T::zero() && r <= T::one()) {
            return Err(Error::LevelOutOfRange { level: r.to_f64_lossy(), range: "(0, 1]" });
        }
        let eps = T::tol(1e-14);
        let mut cum = T::zero();
        for a in &self.atoms {
            cum = cum + a.prob;
            if cum >= r - eps {
                return Ok(a.value);
            }
        }
        Ok(self.max())
    }

    /// `∫_0^a q(r) dr` for `a` in `[0, 1]`.
    pub fn lower_integral(&self, a: T) -> T {
        let mut remaining = a.max(T::zero()).min(T::one());
        let mut acc = T::zero();
        for atom in &self.atoms {
            if remaining <= T::zero() {
                break;
            }
            let w = atom.prob.min(remaining);
            acc = acc + w * atom.value;
            remaining = remaining - w;
        }
        acc
    }

    /// Expected Shortfall at level `p` in `[0, 1]`.
    pub fn es(&self, p: T) -> Result<T> {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(Error::LevelOutOfRange { level: p.to_f64_lossy(), range: "[0, 1]" });
        }
        if p == T::one() {
            return Ok(-self.min());
        }
        if p == T::zero() {
            return Ok(-self.mean());
        }
        let a = T::one() - p;
        Ok(-self.lower_integral(a) / a)
    }

    /// Kinks `(a, G(a))` of the lower-quantile integral, from `(0, 0)` to `(1, mean)`.
    pub fn integral_kinks(&self) -> Vec<(T, T)> {
        let mut out = Vec::with_capacity(self.atoms.len() + 1);
        out.push((T::zero(), T::zero()));
        let (mut a, mut g) = (T::zero(), T::zero());
        let last = self.atoms.len() - 1;
        for (i, atom) in self.atoms.iter().enumerate() {
            g = g + atom.prob * atom.value;
            a = if i == last { T::one() } else { a + atom.prob };
            out.push((a, g));
        }
        out
    }

    pub fn es_curve(&self) -> EsCurve<T> {
        EsCurve { kinks: self.integral_kinks(), min: self.min() }
    }

    /// Pushforward under a nondecreasing map. Atoms are re-sorted and merged.
    pub fn transform<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(T) -> Result<T>,
    {
        let mapped = self.atoms.iter().map(|a| f(a.value).map(|v| (v, a.prob))).collect::<Result<Vec<_>>>()?;
        Self::new(mapped)
    }

    pub fn shift(&self, c: T) -> Self {
        self.map_affine(T::one(), c)
    }

    /// `t * X` for `t > 0`.
    pub fn scale_by(&self, t: T) -> Result<Self> {
        if !(t > T::zero()) {
            return Err(Error::InvalidParameter(format!("scale factor must be positive, got {t}")));
        }
        Ok(self.map_affine(t, T::zero()))
    }

    fn map_affine(&self, t: T, c: T) -> Self {
        Self { atoms: self.atoms.iter().map(|a| Atom { value: t * a.value + c, prob: a.prob }).collect() }
    }

    /// `-X`, re-sorted.
    pub fn negate(&self) -> Self {
        Self { atoms: self.atoms.iter().rev().map(|a| Atom { value: -a.value, prob: a.prob }).collect() }
    }
}

/// Exact representation of `p ↦ ES_p(X)`.
///
/// Stores the kinks `(a, G(a))` of `G(a) = ∫_0^a q_X`, with `a = 1 - p`, plus
/// the smallest atom for the endpoint `p = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EsCurve<T> {
    kinks: Vec<(T, T)>,
    min: T,
}

impl<T: Scalar> EsCurve<T> {
    /// Levels `p` where the curve has kinks, ascending, including 0 and 1.
    pub fn breakpoints(&self) -> Vec<T> {
        self.kinks.iter().rev().map(|&(a, _)| T::one() - a).collect()
    }

    /// `(p, ES_p)` at every breakpoint.
    pub fn points(&self) -> Vec<(T, T)> {
        self.breakpoints().into_iter().map(|p| (p, self.eval(p))).collect()
    }

    pub fn eval(&self, p: T) -> T {
        if p >= T::one() {
            return -self.min;
        }
        let a = T::one() - p.max(T::zero());
        -self.integral_at(a) / a
    }

    /// `G(a)` by linear interpolation between kinks.
    pub fn integral_at(&self, a: T) -> T {
        let idx = self.kinks.partition_point(|&(k, _)| k < a);
        if idx == 0 {
            return self.kinks[0].1;
        }
        if idx == self.kinks.len() {
            return self.kinks[self.kinks.len() - 1].1;
        }
        let (a0, g0) = self.kinks[idx - 1];
        let (a1, g1) = self.kinks[idx];
        if a1 == a {
            return g1;
        }
        g0 + (g1 - g0) * (a - a0) / (a1 - a0)
    }
}

/// Merged kink positions `a` in `(0, 1]` of two laws, ascending and deduplicated.
pub(crate) fn merged_levels<T: Scalar>(x: &DiscreteDistribution<T>, y: &DiscreteDistribution<T>) -> Vec<T> {
    let mut levels: Vec<T> = Vec::with_capacity(x.len() + y.len());
    for d in [x, y] {
        let mut cum = T::zero();
        let last = d.len() - 1;
        for (i, a) in d.atoms.iter().enumerate() {
            cum = if i == last { T::one() } else { cum + a.prob };
            levels.push(cum);
        }
    }
    levels.sort_by(|a, b| a.partial_cmp(b).expect("finite levels"));
    levels.dedup_by(|a, b| (*a - *b).abs() <= T::tol(1e-15));
    levels
}

/// Joint walk over the quantile functions of two laws.
///
/// Each item `(w, x, y)` is a maximal interval of width `w` on which
/// `q_X = x` and `q_Y = y`; interval ends are exactly the merged kinks.
pub(crate) struct MergedSteps<'a, T> {
    x: &'a [Atom<T>],
    y: &'a [Atom<T>],
    i: usize,
    j: usize,
    rx: T,
    ry: T,
}

impl<'a, T: Scalar> MergedSteps<'a, T> {
    pub(crate) fn new(x: &'a DiscreteDistribution<T>, y: &'a DiscreteDistribution<T>) -> Self {
        Self { x: &x.atoms, y: &y.atoms, i: 0, j: 0, rx: x.atoms[0].prob, ry: y.atoms[0].prob }
    }
}

impl<T: Scalar> Iterator for MergedSteps<'_, T> {
    type Item = (T, T, T);

    fn next(&mut self) -> Option<Self::Item> {
        if self.i >= self.x.len() || self.j >= self.y.len() {
            return None;
        }
        let last_x = self.i + 1 == self.x.len();
        let last_y = self.j + 1 == self.y.len();
        let w = match (last_x, last_y) {
            (true, true) => self.rx.max(self.ry),
            (true, false) => self.ry,
            (false, true) => self.rx,
            (false, false) => self.rx.min(self.ry),
        };
        let item = (w, self.x[self.i].value, self.y[self.j].value);
        let eps = T::epsilon() * T::lit(8.0);
        self.rx = self.rx - w;
        self.ry = self.ry - w;
        // The final atom of one law absorbs rounding drift until the other
        // law is exhausted as well.
        if self.rx <= eps && !(last_x && !last_y) {
            self.i += 1;
            self.rx = self.x.get(self.i).map_or(T::zero(), |a| a.prob);
        }
        if self.ry <= eps && !(last_y && !last_x) {
            self.j += 1;
            self.ry = self.y.get(self.j).map_or(T::zero(), |a| a.prob);
        }
        Some(item)
    }
}

/// Levels `p` in `(0, 1)` where the ES curves of `x` and `y` cross.
///
/// `D(a) = G_y(a) - G_x(a)` is piecewise linear between merged kinks, so each
/// sign change is located exactly by linear interpolation.
pub fn es_crossings<T: Scalar>(x: &DiscreteDistribution<T>, y: &DiscreteDistribution<T>) -> Vec<T> {
    let cx = x.es_curve();
    let cy = y.es_curve();
    let zero_tol = T::tol(1e-12) * x.scale().max(y.scale());
    let pts: Vec<(T, T)> =
        merged_levels(x, y).into_iter().map(|a| (a, cy.integral_at(a) - cx.integral_at(a))).collect();
    let mut out = Vec::new();
    let mut prev: Option<(T, T)> = None;
    let mut pending_zero: Option<T> = None;
    for (a, d) in pts {
        if d.abs() <= zero_tol {
            if pending_zero.is_none() {
                pending_zero = Some(a);
            }
            continue;
        }
        if let Some((a0, d0)) = prev {
            if d0.signum() != d.signum() {
                let root = match pending_zero {
                    Some(z) => z,
                    None => a0 + (a - a0) * d0 / (d0 - d),
                };
                let p = T::one() - root;
                if p > T::zero() && p < T::one() {
                    out.push(p);
                }
            }
        }
        prev = Some((a, d));
        pending_zero = None;
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    out
}
