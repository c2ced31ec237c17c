//! Constructive searches for violations of `v`-SD consistency.
//!
//! A risk measure `ρ` is consistent with `≤_{v-SD}` when `X ≤_{v-SD} Y`
//! implies `ρ(X) ≥ ρ(Y)`. The searches below produce concrete pairs for which
//! this fails and re-verify them with the exact dominance check.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::orders::{certainty_equivalent, ssd_scan, vsd_dominates};
use crate::riskmeasures::{base_risk_measure, RiskFunctional};
use crate::scalar::Scalar;
use crate::utility::ThresholdUtility;

/// Minimal margin by which an emitted witness violates consistency.
pub const VIOLATION_TOL: f64 = 1e-8;
/// Translation gaps below this size are not pursued.
pub const GAP_THRESHOLD: f64 = 1e-6;
/// Bisection width used when re-verifying through base risk measures.
const VERIFY_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub enum WitnessPayload<T> {
    /// `ρ_{Z,v}` with benchmark `Z` violates consistency on the pair below.
    TranslationGap { benchmark: DiscreteDistribution<T>, shift: T, gap: T },
    /// Two-point payoffs `h(Y_{t,s})` and `h(Y_{t',s'})` with `P(A) = p`.
    Mps { p: T, s_prime: T, s: T, t: T, t_prime: T },
}

/// A pair `X ≤_{v-SD} Y` with `ρ(X) < ρ(Y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct Witness<T> {
    pub payload: WitnessPayload<T>,
    /// The `v`-SD smaller payoff `X`.
    pub dominated: DiscreteDistribution<T>,
    /// The `v`-SD larger payoff `Y`.
    pub dominating: DiscreteDistribution<T>,
    pub risk_dominated: T,
    pub risk_dominating: T,
}

impl<T: Scalar> Witness<T> {
    /// `ρ(Y) - ρ(X)`, positive for a violation.
    pub fn violation(&self) -> T {
        self.risk_dominating - self.risk_dominated
    }
}

/// `K_v(Z + d) - K_v(Z) - d`, identically zero exactly for CARA utilities.
pub fn translation_gap<T: Scalar>(v: &ThresholdUtility<T>, z: &DiscreteDistribution<T>, d: T) -> Result<T> {
    Ok(certainty_equivalent(&z.shift(d), v)? - certainty_equivalent(z, v)? - d)
}

/// `n` evenly spaced points on `[lo, hi]`.
fn linspace<T: Scalar>(lo: T, hi: T, n: usize) -> Vec<T> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * T::lit(i as f64) / T::lit((n - 1) as f64)).collect()
}

/// Middle 80% of the domain of `v` after truncation to `[-10, 10]`.
fn core_interval<T: Scalar>(v: &ThresholdUtility<T>) -> (T, T) {
    let (lo, hi) = v.domain();
    let ten = T::lit(10.0);
    let (lo, hi) = (lo.max(-ten), hi.min(ten));
    let margin = (hi - lo) * T::lit(0.1);
    (lo + margin, hi - margin)
}

/// Grid of centres, spreads and shifts for [`pratt_witness`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrattGrid<T> {
    pub centers: Vec<T>,
    pub spreads: Vec<T>,
    pub shifts: Vec<T>,
}

impl<T: Scalar> PrattGrid<T> {
    /// 21 centres over the middle of the domain, 7 log-spaced spreads in
    /// `[0.01, 1]` (smallest first) and 41 shifts in `[-5, 5]`.
    pub fn default_for(v: &ThresholdUtility<T>) -> Self {
        let (lo, hi) = core_interval(v);
        Self {
            centers: linspace(lo, hi, 21),
            spreads: crate::orders::log_grid(T::lit(0.01), T::one(), 7),
            shifts: linspace(T::lit(-5.0), T::lit(5.0), 41),
        }
    }

    pub fn len(&self) -> usize {
        self.centers.len() * self.spreads.len() * self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn point(&self, k: usize) -> (T, T, T) {
        let nd = self.shifts.len();
        let ns = self.spreads.len();
        (self.centers[k / (ns * nd)], self.spreads[(k / nd) % ns], self.shifts[k % nd])
    }
}

fn translation_candidate<T: Scalar>(v: &ThresholdUtility<T>, x: T, s: T, d: T) -> Result<Option<Witness<T>>> {
    if d == T::zero() {
        return Ok(None);
    }
    let z = DiscreteDistribution::mean_preserving_spread(x, s, T::half())?;
    let gap = translation_gap(v, &z, d)?;
    if gap.abs() <= T::lit(GAP_THRESHOLD) {
        return Ok(None);
    }
    // If K_v(Z + d) < K_v(Z) + d, the benchmark Z prices Z + d at -d but its
    // certainty equivalent at K_v(Z) - K_v(Z + d) > -d. Otherwise swap roles
    // by using Z + d as the benchmark and shifting by -d.
    let (benchmark, shift) = if gap < T::zero() { (z, d) } else { (z.shift(d), -d) };
    let dominated = benchmark.shift(shift);
    let dominating = DiscreteDistribution::point_mass(certainty_equivalent(&dominated, v)?)?;
    let w = Witness {
        payload: WitnessPayload::TranslationGap { benchmark, shift, gap },
        dominated,
        dominating,
        risk_dominated: T::zero(),
        risk_dominating: T::zero(),
    };
    let w = recheck_translation(w, v)?;
    Ok((w.violation() > T::lit(VIOLATION_TOL)).then_some(w))
}

/// Recomputes both base-risk values of a translation-gap witness after
/// confirming the dominance pair; the dominance must hold.
pub fn recheck_translation<T: Scalar>(mut w: Witness<T>, v: &ThresholdUtility<T>) -> Result<Witness<T>> {
    let WitnessPayload::TranslationGap { benchmark, .. } = &w.payload else {
        return Err(Error::InvalidParameter("not a translation-gap witness".into()));
    };
    if !vsd_dominates(&w.dominated, &w.dominating, v)?.dominated {
        return Err(Error::InvalidParameter("witness pair is not v-SD ordered".into()));
    }
    let tol = T::tol(VERIFY_TOL);
    w.risk_dominated = base_risk_measure(benchmark, v, &w.dominated, tol)?;
    w.risk_dominating = base_risk_measure(benchmark, v, &w.dominating, tol)?;
    Ok(w)
}

/// Searches mean-preserving spreads `Z` and shifts `d` for a nonzero
/// translation gap and returns the first verified witness in grid order.
///
/// A nonzero gap shows that some base risk measure `ρ_{Z,v}` is not
/// consistent with `≤_{v-SD}`.
pub fn pratt_witness<T: Scalar>(v: &ThresholdUtility<T>, grid: &PrattGrid<T>) -> Option<Witness<T>> {
    (0..grid.len()).into_par_iter().find_map_first(|k| {
        let (x, s, d) = grid.point(k);
        translation_candidate(v, x, s, d).ok().flatten()
    })
}

/// Grid of event probabilities and utility levels for [`mps_witness`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MpsGrid<T> {
    pub probs: Vec<T>,
    /// Increasing levels in `v(I)`.
    pub levels: Vec<T>,
}

impl<T: Scalar> MpsGrid<T> {
    /// `P(A)` in `{0.05, ..., 0.95}` and utility levels `v(x)` for 33 points
    /// `x` across the middle of the domain.
    pub fn default_for(v: &ThresholdUtility<T>) -> Self {
        let (lo, hi) = core_interval(v);
        let mut levels: Vec<T> = linspace(lo, hi, 33).into_iter().filter_map(|x| v.eval(x).ok()).collect();
        levels.dedup();
        Self { probs: (1..20).map(|i| T::lit(i as f64 * 0.05)).collect(), levels }
    }
}

fn two_point_in_utility<T: Scalar>(
    v: &ThresholdUtility<T>,
    p: T,
    top: T,
    bottom: T,
) -> Result<DiscreteDistribution<T>> {
    DiscreteDistribution::two_point(v.inverse(bottom)?, v.inverse(top)?, p)
}

/// Searches pairs of two-point payoffs whose utilities are mean-preserving
/// spreads of each other. With `P(A) = p`, `Y_{t,s} = t 1_A + s 1_{A^c}` and
/// `s' = s - p (t' - t) / (1 - p)`, the payoff `h(Y_{t',s'})` is `v`-SD below
/// `h(Y_{t,s})`, so a `v`-consistent `ρ` must not rank it as less risky.
pub fn mps_witness<T, R>(rho: &R, v: &ThresholdUtility<T>, grid: &MpsGrid<T>) -> Option<Witness<T>>
where
    T: Scalar,
    R: RiskFunctional<T> + ?Sized,
{
    let n = grid.levels.len();
    let mut triples = Vec::new();
    for pi in 0..grid.probs.len() {
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    triples.push((pi, i, j, k));
                }
            }
        }
    }
    triples.into_par_iter().find_map_first(|(pi, i, j, k)| {
        let (p, s, t, t_prime) = (grid.probs[pi], grid.levels[i], grid.levels[j], grid.levels[k]);
        let s_prime = s - p * (t_prime - t) / (T::one() - p);
        let inner = two_point_in_utility(v, p, t, s).ok()?;
        let outer = two_point_in_utility(v, p, t_prime, s_prime).ok()?;
        let w = Witness {
            payload: WitnessPayload::Mps { p, s_prime, s, t, t_prime },
            dominated: outer,
            dominating: inner,
            risk_dominated: T::zero(),
            risk_dominating: T::zero(),
        };
        let w = recheck_mps(w, rho, v).ok()?;
        (w.violation() > T::lit(VIOLATION_TOL)).then_some(w)
    })
}

/// Recomputes `ρ` on both payoffs of a witness after confirming the dominance pair.
pub fn recheck_mps<T, R>(mut w: Witness<T>, rho: &R, v: &ThresholdUtility<T>) -> Result<Witness<T>>
where
    T: Scalar,
    R: RiskFunctional<T> + ?Sized,
{
    if !vsd_dominates(&w.dominated, &w.dominating, v)?.dominated {
        return Err(Error::InvalidParameter("witness pair is not v-SD ordered".into()));
    }
    w.risk_dominated = rho.risk(&w.dominated)?;
    w.risk_dominating = rho.risk(&w.dominating)?;
    Ok(w)
}

/// Two agents' payoffs on the states `A` and `A^c`, each of probability 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoStateAllocation<T> {
    pub x1: [T; 2],
    pub x2: [T; 2],
}

impl<T: Scalar> TwoStateAllocation<T> {
    /// `(-0.1 1_A - 1.9 1_{A^c}, -0.9 1_A - 0.1 1_{A^c})`, a non-comonotone
    /// split of `-1_A - 2 1_{A^c}`.
    pub fn negative_instance() -> Self {
        let l = T::lit;
        Self { x1: [l(-0.1), l(-1.9)], x2: [l(-0.9), l(-0.1)] }
    }

    /// The sign-flipped instance on `(0, ∞)`.
    pub fn positive_instance() -> Self {
        let n = Self::negative_instance();
        Self { x1: [-n.x1[0], -n.x1[1]], x2: [-n.x2[0], -n.x2[1]] }
    }

    pub fn total(&self) -> [T; 2] {
        [self.x1[0] + self.x2[0], self.x1[1] + self.x2[1]]
    }

    fn law(values: [T; 2]) -> Result<DiscreteDistribution<T>> {
        DiscreteDistribution::new([(values[0], T::half()), (values[1], T::half())])
    }

    /// `(Y1, Y2) = (X1 - a 1_A + b 1_{A^c}, X2 + a 1_A - b 1_{A^c})`.
    pub fn reallocate(&self, a: T, b: T) -> Self {
        Self { x1: [self.x1[0] - a, self.x1[1] + b], x2: [self.x2[0] + a, self.x2[1] - b] }
    }

    /// Whether both coordinates move in the same direction as the total.
    pub fn is_comonotone(&self) -> bool {
        let [ta, tc] = self.total();
        let dir = |x: [T; 2]| (x[0] - x[1]) * (ta - tc) >= T::zero();
        dir(self.x1) && dir(self.x2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HitKind {
    /// Both coordinates weakly improve and some inequality is strict.
    Strict,
    /// Both coordinates weakly improve with every inequality tight.
    Reflexive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComonotoneHit<T> {
    pub a: T,
    pub b: T,
    pub kind: HitKind,
    pub allocation: TwoStateAllocation<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComonotoneReport<T> {
    pub resolution: usize,
    /// Box for `a` and `b` implied by the domain of `v`.
    pub a_range: (T, T),
    pub b_range: (T, T),
    /// Grid points satisfying the comonotonicity constraint and checked.
    pub scanned: usize,
    /// Grid points outside the comonotonicity band or the domain.
    pub skipped: usize,
    pub hit: Option<ComonotoneHit<T>>,
}

fn improves<T: Scalar>(
    y: &TwoStateAllocation<T>,
    v: &ThresholdUtility<T>,
    vx: &[DiscreteDistribution<T>; 2],
) -> Option<HitKind> {
    let mut strict = false;
    for (i, vals) in [y.x1, y.x2].into_iter().enumerate() {
        let vy = TwoStateAllocation::law([v.eval(vals[0]).ok()?, v.eval(vals[1]).ok()?]).ok()?;
        let scan = ssd_scan(&vx[i], &vy);
        if !scan.verdict.dominated {
            return None;
        }
        strict |= scan.strict;
    }
    Some(if strict { HitKind::Strict } else { HitKind::Reflexive })
}

/// Grid search for a comonotone reallocation `Y` with `X_i ≤_{v-SD} Y_i` for
/// both agents.
///
/// The reallocation parameters `(a, b)` range over the box that keeps every
/// payoff inside the domain of `v`, restricted to the band on `a + b` that
/// makes `Y` comonotone. The grid is cell-centred with `resolution²` points;
/// the first hit in row-major order is reported. A comonotone input is
/// checked first through the trivial reallocation `(0, 0)`.
pub fn comonotone_improvement_search<T: Scalar>(
    x: &TwoStateAllocation<T>,
    v: &ThresholdUtility<T>,
    resolution: usize,
) -> Result<ComonotoneReport<T>> {
    if resolution < 100 {
        return Err(Error::InvalidParameter(format!("resolution must be at least 100, got {resolution}")));
    }
    let [ta, tc] = x.total();
    if ta == tc {
        return Err(Error::InvalidParameter("aggregate payoff is constant".into()));
    }
    let (lo, hi) = v.domain();
    // Y1_A = x1a - a, Y2_A = x2a + a, Y1_c = x1c + b, Y2_c = x2c - b.
    let a_range = ((x.x1[0] - hi).max(lo - x.x2[0]), (x.x1[0] - lo).min(hi - x.x2[0]));
    let b_range = ((lo - x.x1[1]).max(x.x2[1] - hi), (hi - x.x1[1]).min(x.x2[1] - lo));
    for r in [a_range, b_range] {
        if !(r.0.is_finite() && r.1.is_finite() && r.0 < r.1) {
            return Err(Error::InvalidParameter(format!(
                "reallocation box ({}, {}) is not bounded by the domain of {v}",
                r.0, r.1
            )));
        }
    }
    // Comonotone iff both Y_i move with the aggregate.
    let (band_lo, band_hi) =
        if ta > tc { (x.x2[1] - x.x2[0], x.x1[0] - x.x1[1]) } else { (x.x1[0] - x.x1[1], x.x2[1] - x.x2[0]) };
    let vx = [
        TwoStateAllocation::law([v.eval(x.x1[0])?, v.eval(x.x1[1])?])?,
        TwoStateAllocation::law([v.eval(x.x2[0])?, v.eval(x.x2[1])?])?,
    ];
    let mut report = ComonotoneReport { resolution, a_range, b_range, scanned: 0, skipped: 0, hit: None };
    if x.is_comonotone() {
        report.scanned = 1;
        if let Some(kind) = improves(x, v, &vx) {
            report.hit = Some(ComonotoneHit { a: T::zero(), b: T::zero(), kind, allocation: *x });
            return Ok(report);
        }
    }
    let step = |r: (T, T), i: usize| r.0 + (r.1 - r.0) * (T::lit(i as f64) + T::half()) / T::lit(resolution as f64);
    let rows: Vec<(usize, usize, Option<ComonotoneHit<T>>)> = (0..resolution)
        .into_par_iter()
        .map(|i| {
            let a = step(a_range, i);
            let (mut scanned, mut skipped) = (0, 0);
            for j in 0..resolution {
                let b = step(b_range, j);
                let sum = a + b;
                if sum < band_lo || sum > band_hi {
                    skipped += 1;
                    continue;
                }
                let y = x.reallocate(a, b);
                scanned += 1;
                if let Some(kind) = improves(&y, v, &vx) {
                    return (scanned, skipped, Some(ComonotoneHit { a, b, kind, allocation: y }));
                }
            }
            (scanned, skipped, None)
        })
        .collect();
    for (scanned, skipped, hit) in rows {
        report.scanned += scanned;
        report.skipped += skipped;
        if report.hit.is_none() {
            report.hit = hit;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riskmeasures::{BenchmarkSet, CaraMeyer, ExpectedShortfall, WorstCase};
    use approx::assert_abs_diff_eq;

    type D = DiscreteDistribution<f64>;
    type U = ThresholdUtility<f64>;

    #[test]
    fn cara_has_no_translation_gap() {
        let z = D::new([(-1.0, 0.3), (0.5, 0.3), (2.0, 0.4)]).unwrap();
        for c in [-1.0, 1.0, 0.0] {
            let u = U::cara(c).unwrap();
            for d in [-3.0, -0.1, 0.0, 2.5] {
                assert!(translation_gap(&u, &z, d).unwrap().abs() < 1e-10);
            }
        }
        let u = U::logistic(1.0).unwrap();
        assert_eq!(translation_gap(&u, &z, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn logistic_has_a_visible_gap() {
        let u = U::logistic(1.0).unwrap();
        let z = D::mean_preserving_spread(0.0, 0.1, 0.5).unwrap();
        let best = (0..=60)
            .map(|i| -3.0 + 0.1 * i as f64)
            .map(|d| translation_gap(&u, &z, d).unwrap().abs())
            .fold(0.0, f64::max);
        assert!(best > 1e-6, "{best}");
    }

    #[test]
    fn pratt_search_respects_cara() {
        let u = U::cara(-1.0).unwrap();
        assert!(pratt_witness(&u, &PrattGrid::default_for(&u)).is_none());
    }

    #[test]
    fn pratt_witness_for_sahara_reverifies() {
        let u = U::sahara(1.0, 1.0, 0.0).unwrap();
        let w = pratt_witness(&u, &PrattGrid::default_for(&u)).expect("witness");
        assert!(w.violation() > VIOLATION_TOL);
        let again = recheck_translation(w.clone(), &u).unwrap();
        assert_abs_diff_eq!(again.violation(), w.violation(), epsilon = 1e-12);
    }

    #[test]
    fn mps_search_examples() {
        let logistic = U::logistic(1.0).unwrap();
        let grid = MpsGrid::default_for(&logistic);
        assert!(mps_witness(&WorstCase, &logistic, &grid).is_none());
        let w = mps_witness(&ExpectedShortfall { p: 0.9 }, &logistic, &grid).expect("witness");
        assert!(w.violation() > VIOLATION_TOL);
        assert!(vsd_dominates(&w.dominated, &w.dominating, &logistic).unwrap().dominated);

        let c = -0.7;
        let cara = U::cara(c).unwrap();
        let bench = BenchmarkSet::single(D::new([(-1.0, 0.5), (1.5, 0.5)]).unwrap());
        let rho = CaraMeyer { c, bench: bench.clone() };
        let grid = MpsGrid::default_for(&cara);
        assert!(mps_witness(&rho, &cara, &grid).is_none());
    }

    #[test]
    fn algebraic_shortcuts_match_exact_check() {
        // (0.1 + a)(1.9 - b) ≤ 0.19 and (0.9 - a)(0.1 + b) ≤ 0.09 are necessary
        // for an improvement; spot-check them against the exact dominance test.
        let x = TwoStateAllocation::<f64>::negative_instance();
        let v = U::neg_log_neg();
        let vx = [
            TwoStateAllocation::law([v.eval(x.x1[0]).unwrap(), v.eval(x.x1[1]).unwrap()]).unwrap(),
            TwoStateAllocation::law([v.eval(x.x2[0]).unwrap(), v.eval(x.x2[1]).unwrap()]).unwrap(),
        ];
        for i in 0..50 {
            for j in 0..50 {
                let a = -0.09 + 0.98 * i as f64 / 50.0;
                let b = -0.09 + 1.98 * j as f64 / 50.0;
                let shortcut = (0.1 + a) * (1.9 - b) <= 0.19 && (0.9 - a) * (0.1 + b) <= 0.09;
                if improves(&x.reallocate(a, b), &v, &vx).is_some() {
                    assert!(shortcut, "({a}, {b})");
                }
            }
        }
    }

    #[test]
    fn comonotone_input_is_its_own_improvement() {
        let x = TwoStateAllocation { x1: [-0.5, -1.5], x2: [-0.5, -0.6] };
        assert!(x.is_comonotone());
        let r = comonotone_improvement_search(&x, &U::neg_log_neg(), 100).unwrap();
        let hit = r.hit.unwrap();
        assert_eq!((hit.a, hit.b, hit.kind), (0.0, 0.0, HitKind::Reflexive));
    }

    #[test]
    fn negative_instance_box_and_band() {
        let x = TwoStateAllocation::<f64>::negative_instance();
        assert!(!x.is_comonotone());
        let r = comonotone_improvement_search(&x, &U::neg_log_neg(), 200).unwrap();
        assert_abs_diff_eq!(r.a_range.0, -0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(r.a_range.1, 0.9, epsilon = 1e-15);
        assert_abs_diff_eq!(r.b_range.0, -0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(r.b_range.1, 1.9, epsilon = 1e-15);
        assert_eq!(r.scanned + r.skipped, 200 * 200);
        assert!(r.hit.is_none());
    }
}
