use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for dimension {dim}")]
    OutOfRange { index: usize, dim: usize },

    #[error("input too large: {0}")]
    TooLarge(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: {message}")]
    MalformedLine { line: usize, message: String },

    #[error("label `{label}` already ends in `_r`; cannot add inverse edges")]
    InverseCollision { label: String },

    #[error("graph label `{0}` collides with a grammar nonterminal")]
    LabelCollision(String),

    #[error("invalid state machine: {0}")]
    InvalidMachine(String),

    #[error("unknown nonterminal `{0}`")]
    UnknownNonterminal(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("symbol `{0}` is neither a terminal nor a nonterminal")]
    UnknownSymbol(String),

    #[error("unsupported index format version {found} (expected {expected})")]
    VersionMismatch { expected: u32, found: String },

    #[error("corrupt index at line {line}: {message}")]
    CorruptIndex { line: usize, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Whether the error stems from malformed user input rather than I/O.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Io { .. })
    }
}
