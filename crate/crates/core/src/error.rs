use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// `a` has no inverse modulo `m`; `factor` is gcd(a, m), a nontrivial divisor of `m`
    /// whenever it differs from `m`.
    #[error("{value} is not invertible modulo {modulus} (gcd = {factor})")]
    NotInvertible {
        value: BigInt,
        modulus: BigInt,
        factor: BigInt,
    },

    #[error("basis columns are linearly dependent (rank deficiency at column {0})")]
    RankDeficient(usize),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("{what} of size {size} exceeds the enumeration limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("pipeline corruption: {0}")]
    Corrupt(String),

    #[error("budget exhausted: {0}")]
    Budget(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
