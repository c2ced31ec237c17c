//! Daily price series, log returns and summary statistics.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::dist::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries<T> {
    pub label: String,
    observations: Vec<(NaiveDate, T)>,
}

impl<T: Scalar> PriceSeries<T> {
    /// Validates positive finite prices and strictly increasing dates.
    pub fn new(label: impl Into<String>, observations: Vec<(NaiveDate, T)>) -> Result<Self> {
        for (i, &(_, p)) in observations.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFinite(p.to_f64_lossy()));
            }
            if !(p > T::zero()) {
                return Err(Error::InvalidParameter(format!("price {p} in row {} is not positive", i + 1)));
            }
        }
        if let Some(i) = observations.windows(2).position(|w| w[0].0 >= w[1].0) {
            return Err(Error::UnorderedDates(i + 2));
        }
        Ok(Self { label: label.into(), observations })
    }

    pub fn observations(&self) -> &[(NaiveDate, T)] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// Observations dated inside `window`.
    pub fn restrict(&self, window: &Window) -> Self {
        Self {
            label: self.label.clone(),
            observations: self.observations.iter().filter(|(d, _)| window.contains(*d)).copied().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries<T> {
    pub label: String,
    pub values: Vec<(NaiveDate, T)>,
}

impl<T: Scalar> ReturnSeries<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Empirical law with equal weight on each observation.
    pub fn empirical(&self) -> Result<DiscreteDistribution<T>> {
        let v: Vec<T> = self.values.iter().map(|&(_, r)| r).collect();
        DiscreteDistribution::from_samples(&v)
    }
}

/// `r = log(P_{t+1} / P_t)`, dated at `t + 1`.
pub fn log_returns<T: Scalar>(p: &PriceSeries<T>) -> Result<ReturnSeries<T>> {
    if p.len() < 2 {
        return Err(Error::TooFewObservations(p.len()));
    }
    let values = p.observations.windows(2).map(|w| (w[1].0, (w[1].1 / w[0].1).ln())).collect();
    Ok(ReturnSeries { label: p.label.clone(), values })
}

/// `a - b` on the dates both series share.
pub fn align_and_diff<T: Scalar>(a: &ReturnSeries<T>, b: &ReturnSeries<T>) -> Result<ReturnSeries<T>> {
    let (mut i, mut j) = (0, 0);
    let mut values = Vec::new();
    while i < a.values.len() && j < b.values.len() {
        let (da, ra) = a.values[i];
        let (db, rb) = b.values[j];
        match da.cmp(&db) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                values.push((da, ra - rb));
                i += 1;
                j += 1;
            }
        }
    }
    if values.is_empty() {
        return Err(Error::EmptyIntersection(a.label.clone(), b.label.clone()));
    }
    Ok(ReturnSeries { label: format!("{}-{}", a.label, b.label), values })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary<T> {
    pub min: T,
    pub q1: T,
    pub median: T,
    pub mean: T,
    pub q3: T,
    pub max: T,
}

/// Sample statistics with lower-quantile quartiles. R's default quantile
/// type interpolates, so quartiles may differ from its `summary()`.
pub fn summary<T: Scalar>(r: &ReturnSeries<T>) -> Result<Summary<T>> {
    let d = r.empirical()?;
    Ok(Summary {
        min: d.min(),
        q1: d.quantile(T::lit(0.25))?,
        median: d.quantile(T::half())?,
        mean: d.mean(),
        q3: d.quantile(T::lit(0.75))?,
        max: d.max(),
    })
}

/// Closed date interval; a missing end is unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Window {
    pub from: Option<NaiveDate>,
    pub to: Option<NaiveDate>,
}

impl Window {
    pub fn new(from: Option<NaiveDate>, to: Option<NaiveDate>) -> Result<Self> {
        if let (Some(f), Some(t)) = (from, to) {
            if f > t {
                return Err(Error::InvalidParameter(format!("window start {f} is after end {t}")));
            }
        }
        Ok(Self { from, to })
    }

    fn preset(from: (i32, u32, u32), to: (i32, u32, u32)) -> Self {
        let d = |(y, m, d)| NaiveDate::from_ymd_opt(y, m, d);
        Self { from: d(from), to: d(to) }
    }

    /// 30 March 2007 to 31 December 2009.
    pub fn crisis() -> Self {
        Self::preset((2007, 3, 30), (2009, 12, 31))
    }

    /// 2012 through 2014.
    pub fn stable() -> Self {
        Self::preset((2012, 1, 1), (2014, 12, 31))
    }

    /// 2020 through 2024.
    pub fn recovery() -> Self {
        Self::preset((2020, 1, 1), (2024, 12, 31))
    }

    /// Looks up `crisis`, `stable` or `recovery`.
    pub fn named(name: &str) -> Option<Self> {
        match name {
            "crisis" => Some(Self::crisis()),
            "stable" => Some(Self::stable()),
            "recovery" => Some(Self::recovery()),
            _ => None,
        }
    }

    pub fn contains(&self, d: NaiveDate) -> bool {
        self.from.is_none_or(|f| d >= f) && self.to.is_none_or(|t| d <= t)
    }
}
