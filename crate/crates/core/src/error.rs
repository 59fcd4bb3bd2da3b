use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid generator polynomial: {0}")]
    Polynomial(String),
    #[error("LFSR seed must be nonzero")]
    ZeroSeed,
    #[error("seed has {got} bits, register has {expected} stages")]
    SeedLength { expected: usize, got: usize },
    #[error("requested sequence length must be at least 1")]
    ZeroLength,
    #[error("{requested} users requested but the code family only has {capacity} distinct shifts")]
    UserCapacity { requested: usize, capacity: usize },
    #[error("sequence periods differ ({left} vs {right})")]
    PeriodMismatch { left: usize, right: usize },
    #[error("{len} bits cannot be split into {per}-bit groups")]
    Indivisible { len: usize, per: usize },
    #[error("frame carries {frame} symbols but {expected} was requested")]
    SchemeMismatch { frame: String, expected: String },
    #[error("spreading factor {sf} exceeds code period {period}")]
    SpreadingFactor { sf: usize, period: usize },
    #[error("user codes are not distinct")]
    DuplicateCodes,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },
    #[error("config key `{key}`: {reason}")]
    Config { key: String, reason: String },
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
}

impl Error {
    pub(crate) fn arg(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument { name, reason: reason.into() }
    }

    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config { key: key.into(), reason: reason.into() }
    }
}
