use thiserror::Error;

use crate::value::ValueKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("kind mismatch: {left} vs {right}")]
    KindMismatch { left: ValueKind, right: ValueKind },

    #[error("malformed kernel document: {0}")]
    Malformed(String),

    #[error("non-square table: {0}")]
    NonSquare(String),

    #[error("duplicate label {label:?} at index {index}")]
    DuplicateLabel { label: String, index: usize },

    #[error("non-finite value at {location}")]
    NonFinite { location: String },

    #[error("unknown value_kind {0:?}")]
    UnknownKind(String),

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error("invalid generator parameters: {0}")]
    InvalidParameter(String),

    #[error("unsupported value kind {kind} for {operation}")]
    UnsupportedKind { operation: &'static str, kind: ValueKind },

    #[error("vanishing entry at {0}")]
    Vanishing(String),

    #[error("{0}")]
    Vector(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
