use thiserror::Error;

/// Errors reported by the library. Every variant is a user-level condition
/// (bad input or a mathematically impossible request), never an internal bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("invalid prime: {0}")]
    InvalidPrime(String),

    #[error("series is not a unit: {0}")]
    NonUnitSeries(String),

    #[error("composition not supported: {0}")]
    CompositionNotSupported(String),

    #[error("no root exists: {0}")]
    RootObstruction(String),

    #[error("not integral at the prime: {0}")]
    NotPiIntegral(String),

    #[error("weight must be even: {0}")]
    NotEvenWeight(String),

    #[error("odd weight is not supported: {0}")]
    OddWeightUnsupported(String),

    #[error("not in the span of the isobaric basis: {0}")]
    NotInSpan(String),

    #[error("premise violated: {0}")]
    PremiseViolated(String),

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// The same error with `ctx` prefixed to its message.
    pub fn context(self, ctx: &str) -> Error {
        use Error::*;
        let wrap = |m: String| format!("{ctx}: {m}");
        match self {
            InvalidField(m) => InvalidField(wrap(m)),
            InvalidPrime(m) => InvalidPrime(wrap(m)),
            NonUnitSeries(m) => NonUnitSeries(wrap(m)),
            CompositionNotSupported(m) => CompositionNotSupported(wrap(m)),
            RootObstruction(m) => RootObstruction(wrap(m)),
            NotPiIntegral(m) => NotPiIntegral(wrap(m)),
            NotEvenWeight(m) => NotEvenWeight(wrap(m)),
            OddWeightUnsupported(m) => OddWeightUnsupported(wrap(m)),
            NotInSpan(m) => NotInSpan(wrap(m)),
            PremiseViolated(m) => PremiseViolated(wrap(m)),
            InsufficientPrecision(m) => InsufficientPrecision(wrap(m)),
            Parse(m) => Parse(wrap(m)),
            InvalidArgument(m) => InvalidArgument(wrap(m)),
        }
    }
}
