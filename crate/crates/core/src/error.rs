use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{name} = {value} is not a probability in [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid extreme-point parameters: {0}")]
    InvalidExtreme(String),

    #[error("E h(p) = 0: the distribution is supported on {{0,1}}^2")]
    DegenerateDenominator,

    #[error("SVD failed to converge on a {rows}x{cols} normalized joint")]
    RankDeficient { rows: usize, cols: usize },

    #[error("largest singular value is {0}, expected 1")]
    NormalizationCheck(f64),

    #[error("r = {r} outside the Frechet window [{lo}, {hi}] for p = {p}, q = {q}")]
    InfeasibleCorrelation {
        p: f64,
        q: f64,
        r: f64,
        lo: f64,
        hi: f64,
    },

    #[error("t = {0} must lie in (0, 1/2)")]
    EmptyFeasible(f64),

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("bracket [{lo}, {hi}] does not straddle the predicate (lo: {lo_value}, hi: {hi_value}, need > {threshold})")]
    BracketFailure {
        lo: f64,
        hi: f64,
        lo_value: f64,
        hi_value: f64,
        threshold: f64,
    },

    #[error("verification failed: min ratio {min_ratio}, a {a}, beta {beta}")]
    VerificationFailed { min_ratio: f64, a: f64, beta: f64 },

    #[error("n = {0} is outside the supported range")]
    DimensionTooLarge(usize),

    #[error("family is not OR-closed")]
    NotClosed,

    #[error("invalid family: {0}")]
    InvalidFamily(String),
}

pub type Result<T> = std::result::Result<T, Error>;
