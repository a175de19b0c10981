use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid UTF-8 at byte offset {offset}")]
    InvalidUtf8 { offset: usize },

    #[error("line {line}: token {token:?} contains the reserved boundary marker {marker:?}")]
    ReservedMarker {
        line: usize,
        token: String,
        marker: char,
    },

    #[error("corpus has no non-empty sentence")]
    EmptyCorpus,

    #[error("alignment violation: {left} has {left_len} lines, {right} has {right_len}")]
    Misaligned {
        left: &'static str,
        left_len: usize,
        right: &'static str,
        right_len: usize,
    },

    #[error("model format: {0}")]
    ModelFormat(String),

    #[error("model file line {line}: {message}")]
    ModelLine { line: usize, message: String },

    #[error("script spec line {line}: {message}")]
    ScriptSpec { line: usize, message: String },

    #[error("unknown script {0:?}")]
    UnknownScript(String),

    #[error("transliteration table: {0}")]
    Translit(String),

    #[error(
        "alphabets of the two corpora overlap by {overlap:.3} (< {threshold:.3}); \
         provide a transliteration map to learn a joint model"
    )]
    DisjointAlphabets { overlap: f64, threshold: f64 },

    #[error("word {index} ({word:?}): {message}")]
    Segment {
        index: usize,
        word: String,
        message: String,
    },

    #[error("LCSR is undefined for two empty strings")]
    EmptyPair,

    #[error("statistics: {0}")]
    Stats(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
