use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("argument must be positive, got 0")]
    Zero,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("({c}, {d}) does not define a point of P1(Z/{n}): gcd(c, d, n) != 1")]
    NotCoprime { c: i64, d: i64, n: u64 },

    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("{divisor} does not divide {n}")]
    NotDivisor { divisor: u64, n: u64 },

    #[error("join needs lattices of a single index, found {0} and {1}")]
    MixedIndices(u64, u64),

    #[error("empty input")]
    Empty,

    #[error("{0} is not a member")]
    NotMember(String),

    #[error("not a covering")]
    NotCovering,

    #[error("covering is redundant at {0}")]
    Redundant(String),

    #[error("({0}, {1}) is not primitive")]
    NotPrimitive(i64, i64),

    #[error("the two primes must differ, got {0} twice")]
    SamePrimes(u64),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
