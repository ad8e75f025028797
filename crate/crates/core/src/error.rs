use thiserror::Error;

/// Errors raised by the arithmetic engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(String),
    #[error("argument must be nonnegative, got {0}")]
    Negative(String),
    #[error("level must be a positive integer, got {0}")]
    InvalidLevel(String),
    #[error("weight must be an even integer >= 2, got {0}")]
    InvalidWeight(String),
    #[error("n = {n} and N = {level} are not coprime")]
    NotCoprime { n: String, level: String },
    #[error("prime {p} divides the level {level}")]
    PrimeDividesLevel { p: u64, level: u64 },
    #[error("degenerate pair: t^2 >= 4n for t = {t}, n = {n}")]
    Degenerate { t: i64, n: u64 },
    #[error("{what} = {value} exceeds the configured cap {cap}")]
    ResourceCap { what: &'static str, value: u128, cap: u128 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("assembled value is not integral: {0}")]
    NonIntegral(String),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("certificate logic inconclusive: {0}")]
    Inconclusive(String),
    #[error("no engine can serve {0}")]
    NoEngine(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
