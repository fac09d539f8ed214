use thiserror::Error;

/// Errors raised by the library.
///
/// Hypothesis failures are kept separate from "the property is false": a
/// check whose preconditions do not hold returns [`Error::HypothesisNotMet`]
/// instead of `Ok(false)`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} must be positive")]
    NonPositive { what: &'static str },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("polynomial has a non-integer coefficient at x^{exponent}")]
    NonIntegerCoefficient { exponent: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("{what} exceeds the configured budget ({requested} > {limit})")]
    BudgetExceeded {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    #[error("invalid Cayley table: {0}")]
    InvalidCayleyTable(String),

    #[error("element set is not a subgroup")]
    NotASubgroup,

    #[error("invalid normal chain at link {link}: {reason}")]
    InvalidChain { link: usize, reason: String },

    #[error("invalid necklace system: {0}")]
    InvalidSystem(String),

    #[error("no unused prime in class {residue} mod {modulus} below {cutoff}")]
    PrimeSearchCutoff {
        residue: u64,
        modulus: u64,
        cutoff: u64,
    },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
