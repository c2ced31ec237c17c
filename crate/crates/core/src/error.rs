use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty sample")]
    EmptySample,

    #[error("non-finite value {0}")]
    NonFinite(f64),

    #[error("invalid probability {0}: every atom needs mass in (0, 1]")]
    InvalidProbability(f64),

    #[error("probabilities sum to {0}, expected 1")]
    ProbabilitySum(f64),

    #[error("level {level} outside {range}")]
    LevelOutOfRange { level: f64, range: &'static str },

    #[error("argument {value} outside utility domain: must be {bound}")]
    OutsideDomain { value: f64, bound: String },

    #[error("atom outside utility domain: {0}")]
    AtomOutsideDomain(String),

    #[error("shift leaves utility domain (bracket [{lo}, {hi}])")]
    ShiftLeavesDomain { lo: f64, hi: f64 },

    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid g family: {0}")]
    InvalidGFamily(String),

    #[error("zero denominator at c = {0}")]
    ZeroDenominator(f64),

    #[error("nonpositive atom {0}: return transforms need strictly positive payoffs")]
    NonPositiveAtom(f64),

    #[error("need at least 2 observations, got {0}")]
    TooFewObservations(usize),

    #[error("empty date intersection between {0} and {1}")]
    EmptyIntersection(String, String),

    #[error("dates must be strictly increasing (row {0})")]
    UnorderedDates(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
