//! Crate-wide error type.

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("lexicon parse error at line {line}: {message}")]
    LexiconParse { line: usize, message: String },

    #[error("document '{id}' has no in-vocabulary tokens")]
    DegenerateDocument { id: String },

    #[error("document has {rows} embedded tokens but the window needs at least {window}")]
    DocumentTooShort { rows: usize, window: usize },

    #[error("window size must be an odd positive integer, got {0}")]
    InvalidWindow(usize),

    #[error("distance matrix needs at least {min} dimensions, got {got}")]
    TooFewDimensions { got: usize, min: usize },

    #[error("Wasserstein order must be 1 or 2, got {0}")]
    InvalidOrder(u8),

    #[error("label '{0}' has no positive example in the training rows")]
    LabelMissing(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
