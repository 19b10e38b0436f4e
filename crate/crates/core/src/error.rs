use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be greater than 1, got {0}")]
    InvalidModulus(String),

    #[error("exponent must be nonnegative, got {0}")]
    NegativeExponent(String),

    #[error("expected a positive integer, got {0}")]
    NonPositive(String),

    #[error("factorization of {0} is incomplete")]
    IncompleteFactorization(String),

    #[error("genus formula needs d > n (n = {n}, d = {d})")]
    DegreeNotAboveLevel { n: u64, d: u64 },

    #[error("invalid curve parameters: {0}")]
    InvalidCurve(String),

    #[error("quotient equations are defined for the untwisted normal form only")]
    TwistedInput,

    #[error("curve has no coefficient list")]
    MissingCoefficients,

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("polynomial must have degree at least 1")]
    ConstantPolynomial,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("intersection entry for subgroups {0:?} is missing")]
    MissingIntersection(Vec<usize>),

    #[error("partition data is invalid: {0}")]
    InvalidPartition(String),

    #[error("genus matrix is not symmetric at ({0}, {1})")]
    AsymmetricMatrix(usize, usize),

    #[error("dimension mismatch: matrix is {rows}x{cols}, vector has {len} entries")]
    DimensionMismatch { rows: usize, cols: usize, len: usize },

    #[error("closed form is not integral: {0}")]
    NonIntegral(String),

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("invalid group parameters: {0}")]
    InvalidGroup(String),

    #[error("factor cache {path}: {source}")]
    Cache {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
