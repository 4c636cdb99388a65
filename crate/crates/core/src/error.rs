//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("extension degree must be at least 1")]
    ZeroDegree,

    #[error("field order {0} exceeds the enumeration ceiling {1}")]
    FieldTooLarge(u64, u64),

    #[error("element representative {0} out of range for a field of order {1}")]
    BadElement(u64, u64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("ring cardinality q^(n^2) = {0} exceeds the enumeration ceiling {1}")]
    RingTooLarge(u128, u64),

    #[error("matrix index {0} out of range (cardinality {1})")]
    IndexOutOfRange(u64, u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operands belong to different ring specs")]
    MismatchedSpecs,

    #[error("set contains a singular member (index {0})")]
    SingularMember(u64),

    #[error("density {0} outside (0, 1]")]
    BadDensity(f64),

    #[error("rank {0} illegal for this family (n = {1})")]
    IllegalRank(usize, usize),

    #[error("triple space q^(3n^2) = {0} exceeds the materialization ceiling {1}")]
    GraphTooLarge(u128, u64),

    #[error("matrix of dimension {0} exceeds the dense eigensolver ceiling {1}")]
    DenseTooLarge(usize, usize),

    #[error("matrix not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),

    #[error("connection set is not symmetric under negation")]
    AsymmetricConnectionSet,

    #[error("eigensolver failed to converge")]
    NoConvergence,

    #[error("count overflowed 128 bits")]
    Overflow,

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
