use std::io;

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero-norm vector: {0}")]
    ZeroNorm(String),

    #[error("invalid vector: {0}")]
    InvalidVector(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("input has zero variance: {0}")]
    ZeroVariance(String),

    #[error("need at least {needed} items, found {found}")]
    TooFewItems { needed: usize, found: usize },

    #[error("malformed input at line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("line {line}: vector has {found} values but the store dimension is {expected}")]
    DimensionConflict {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("unsupported store format {format:?} version {version}")]
    UnknownFormat { format: String, version: u64 },

    #[error("duplicate text {0:?}")]
    DuplicateText(String),

    #[error("sentence not found: {0:?}")]
    MissingSentence(String),

    #[error("line {line}: unknown label {token:?} (expected fair or unfair)")]
    UnknownLabel { line: usize, token: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("only one class present: {0}")]
    SingleClass(String),

    #[error("class {0} has no members")]
    EmptyClass(String),

    #[error("degenerate split: {0}")]
    DegenerateSplit(String),

    #[error("loss became non-finite after {iteration} iterations")]
    NonFiniteLoss { iteration: usize },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short stable identifier for the error kind, used in machine-readable output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::ZeroNorm(_) => "zero_norm",
            Error::InvalidVector(_) => "invalid_vector",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::ZeroVariance(_) => "zero_variance",
            Error::TooFewItems { .. } => "too_few_items",
            Error::Malformed { .. } => "malformed_input",
            Error::DimensionConflict { .. } => "dimension_conflict",
            Error::UnknownFormat { .. } => "unknown_format",
            Error::DuplicateText(_) => "duplicate_text",
            Error::MissingSentence(_) => "missing_sentence",
            Error::UnknownLabel { .. } => "unknown_label",
            Error::Config(_) => "config",
            Error::SingleClass(_) => "single_class",
            Error::EmptyClass(_) => "empty_class",
            Error::DegenerateSplit(_) => "degenerate_split",
            Error::NonFiniteLoss { .. } => "non_finite_loss",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}
