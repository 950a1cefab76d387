use thiserror::Error;

use crate::value::Value;

/// Which part of the key-polynomial definition a candidate failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeyCondition {
    EquivalenceIrreducible,
    Minimal,
    MonicPositiveDegree,
    DegreeNotIncreasing,
    EquivalentToPrevious,
    DegreeNotDivisible,
}

/// Hypotheses of the integral descent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    PDividesDeg,
    NonUnique,
    NotInRing,
    NotMonic,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("divisor must be monic")]
    MonicRequired,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element of value {0} is not a unit of the valuation ring")]
    NotAUnit(Value),
    #[error("a tower containing an infinite key value does not define a field")]
    PseudoValuationNotAField,
    #[error("unsupported ring descriptor: {0}")]
    UnsupportedRing(String),
    #[error("residual factorization not supported: {0}")]
    UnsupportedResidueFactorization(String),
    #[error("key polynomial condition violated: {0:?}")]
    KeyConditionViolated(KeyCondition),
    #[error("key value {mu} must exceed the current value {current}")]
    KeyValueTooSmall { mu: Value, current: Value },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no finite augmentation continues this branch (limit valuation required): {0}")]
    LimitRequired(String),
    #[error("input polynomial is reducible: {0}")]
    ReducibleInput(String),
    #[error("stage bound {0} exceeded")]
    StageBoundExceeded(usize),
    #[error("extension of the base valuation is not unique")]
    NonUniqueExtension,
    #[error("residue characteristic divides the exponent {0}")]
    ResidueCharDividesDegree(u64),
    #[error("polynomial is not equivalent to the required power of the key")]
    NotEquivalentPower,
    #[error("internal membership failure: {0}")]
    MembershipFailure(String),
    #[error("hypothesis violated: {0:?}")]
    HypothesisViolated(Hypothesis),
    #[error("relation {0} is not homogeneous")]
    RelationNotHomogeneous(usize),
    #[error("relation {0} lift has too small a value")]
    RelationValueTooSmall(usize),
    #[error("semigroup coverage gap at value {0}")]
    CoverageGapFound(Value),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
