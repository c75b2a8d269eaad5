use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("line {line}: malformed embedding line: {reason}")]
    MalformedLine { line: usize, reason: String },

    #[error("line {line}: header declares {expected} dimensions but data has {found}")]
    DimensionMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("header declares {expected} words but the file contains {found}")]
    VocabSizeMismatch { expected: usize, found: usize },

    #[error("no embedding vectors in input")]
    EmptyInput,

    #[error("non-finite value for word `{word}` at dimension {dim}")]
    NonFiniteValue { word: String, dim: usize },

    #[error("value {value} for word `{word}` at dimension {dim} is outside [0, 1]")]
    NotNormalized {
        word: String,
        dim: usize,
        value: f64,
    },

    #[error("invalid embedding table: {0}")]
    InvalidTable(String),

    #[error("line {line}: malformed lexicon line: {reason}")]
    MalformedLexiconLine { line: usize, reason: String },

    #[error("line {line}: unknown category id `{id}`")]
    UnknownCategoryId { line: usize, id: String },

    #[error("missing `%` section delimiter in dictionary")]
    MissingDelimiter,

    #[error("invalid lexicon entry: {0}")]
    InvalidEntry(String),

    #[error("theta must satisfy 0.5 < theta <= 1.0, got {0}")]
    InvalidTheta(f64),

    #[error("no named dimensions to average over")]
    NoNamedDimensions,

    #[error("theta grid is empty")]
    EmptyThetaGrid,

    #[error("no lexicons given")]
    NoLexicons,

    #[error("sweep trend violated for resource `{resource}` at theta {theta}")]
    TrendViolation { resource: String, theta: f64 },
}
