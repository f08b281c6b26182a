use alloc::string::String;
use num_rational::BigRational;
use thiserror::Error;

use crate::parse::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero series")]
    DivisionByZeroSeries,
    #[error("negative or non-integral coefficient {coefficient} at t^{degree}")]
    NonNegativityViolation {
        degree: i64,
        coefficient: BigRational,
    },
    #[error("denominator has no positive real root")]
    NoDominantRoot,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("duplicate class id `{0}`")]
    DuplicateClass(String),
    #[error("unknown class id `{0}`")]
    UnknownClass(String),
    #[error("`{small}` is not below `{large}` in the order")]
    NotComparable { small: String, large: String },
    #[error("invalid route: `{small}` is not below `{large}` (step {step})")]
    InvalidRoute {
        step: usize,
        small: String,
        large: String,
    },
    #[error("route must have an odd number of vertices, got {0}")]
    MalformedRoute(usize),
    #[error("comparison undecided at current precision: {0}")]
    AmbiguousComparison(String),
    #[error("model has no dualizing class")]
    NoDualizing,
    #[error("model has no ring Bass series")]
    MissingRingBass,
    #[error("no class matches the dual of `{0}`")]
    NotClosedUnderDuality(String),
    #[error("no involutive order-reversing pairing matches the series")]
    NoConsistentDuality,
    #[error("class map does not preserve `{small}` below `{large}`")]
    MapNotOrderPreserving { small: String, large: String },
    #[error("class map has no image for `{0}`")]
    IncompleteClassMap(String),
    #[error("class id `{0}` would be produced twice")]
    IdCollision(String),
}
