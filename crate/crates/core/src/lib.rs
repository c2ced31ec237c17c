//! Expected shortfall, stochastic dominance and Meyer risk measures on
//! finitely supported distributions.
//!
//! Everything is generic over [`Scalar`]; the aliases below fix `f64`.

// Guards like `!(x > 0)` also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dist;
pub mod error;
pub mod falsify;
pub mod optimize;
pub mod orders;
pub mod riskmeasures;
mod root;
pub mod scalar;
pub mod timeseries;
pub mod utility;

pub use dist::{es_crossings, Atom, DiscreteDistribution, EsCurve};
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use utility::{Family, ThresholdUtility};

pub type Distribution = DiscreteDistribution<f64>;
pub type Utility = ThresholdUtility<f64>;
pub type Benchmarks = riskmeasures::BenchmarkSet<f64>;
pub type Prices = timeseries::PriceSeries<f64>;
pub type Returns = timeseries::ReturnSeries<f64>;
