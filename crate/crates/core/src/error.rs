use num_rational::BigRational;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Analysis errors raised by the library.
///
/// Parse errors for the series file format live in [`crate::cli::ParseError`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("duplicate exponent {0}")]
    DuplicateExponent(i64),
    #[error("malformed tail certificate: {0}")]
    MalformedCertificate(String),
    #[error("prime contexts differ (p={left} vs p={right})")]
    ContextMismatch { left: u64, right: u64 },
    #[error("unsupported tail: {0}")]
    UnsupportedTail(String),
    #[error("series has a pole at the origin")]
    PoleAtOrigin,
    #[error("window insufficient: {0}")]
    WindowInsufficient(String),
    #[error("series does not converge on the requested range")]
    NonConvergent,
    #[error("series is identically zero")]
    ZeroSeries,
    #[error("invalid valuation range: {0}")]
    InvalidRange(String),
    #[error("root is not liftable: {0}")]
    NotLiftable(String),
    #[error("precision exhausted at {precision} p-adic digits")]
    PrecisionExhausted { precision: u32 },
    #[error("hypothesis violated: series has a zero of valuation {corner} inside the punctured disc")]
    HypothesisViolated { corner: BigRational },
    #[error("contradiction: series is certified zero-free but declares an essential singularity")]
    ContradictionDetected,
    #[error("function is constant")]
    ConstantFunction,
}
