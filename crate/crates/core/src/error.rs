use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid space descriptor: {0}")]
    InvalidSpace(String),

    #[error("dimension mismatch: space has dimension {expected}, vector has {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite coordinate at index {0}")]
    NonFinite(usize),

    #[error("infeasible norm tuple: {0}")]
    InfeasibleTuple(String),

    #[error("norm list must contain a nonzero entry")]
    AllZero,

    #[error("p must lie in (0, 1e6] and, when above 1, satisfy p - 1 >= 1e-9 (got {0})")]
    ExponentOutOfRange(f64),

    #[error("operation requires p > 1 (got {0})")]
    RequiresPAboveOne(f64),

    #[error("mu must contain at least one entry")]
    EmptyCoefficients,

    #[error("mu entries must be nonzero")]
    ZeroCoefficient,

    #[error("mu entries must be finite")]
    NonFiniteCoefficient,

    #[error("point lies outside the h_p domain (sum of a_i^(1/(1-p)) = {0}, must be < 1)")]
    EnvelopeDomain(f64),

    #[error("invalid simplex point: {0}")]
    InvalidSimplexPoint(String),

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("sample set is empty")]
    EmptySampleSet,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
