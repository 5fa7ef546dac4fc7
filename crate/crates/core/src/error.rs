use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series orders differ ({left} vs {right})")]
    OrderMismatch { left: usize, right: usize },

    #[error("series has a zero constant term and cannot be inverted")]
    NonInvertible,

    #[error("series precondition violated: {0}")]
    SeriesPrecondition(&'static str),

    #[error("index {index} is outside 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("expected an integer, got {0}")]
    NotIntegral(String),

    #[error("{what}: size {size} exceeds the enumeration cap {cap}")]
    SizeCapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("oracle disagreement in {0}")]
    OracleDisagreement(String),

    #[error("division by zero: {0}")]
    ZeroDenominator(String),

    #[error("unknown claim id `{0}`")]
    UnknownClaim(String),

    #[error("unknown report format `{0}`")]
    UnknownFormat(String),

    #[error("cannot parse rational `{0}`")]
    ParseRational(String),

    #[error("serialization failed: {0}")]
    Serialization(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
