use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid injection: {0}")]
    InvalidInjection(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("measure index {0} out of range (expected 1..=4)")]
    InvalidMeasure(usize),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("map target is not transitive ({0} orbits)")]
    NonTransitiveTarget(usize),
    #[error("morphism mismatch: {0}")]
    MorphismMismatch(String),
    #[error("not an endomorphism")]
    NotEndomorphism,
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("type mismatch: expected type {expected}, got {found}")]
    TypeMismatch { expected: u8, found: String },
    #[error("arity {requested} exceeds tuple cache ceiling {ceiling}")]
    CeilingExceeded { requested: usize, ceiling: usize },
    #[error("serialization: {0}")]
    Serialization(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
