use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Engine(#[from] kronpath::Error),

    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    /// 1 usage, 2 bad input, 3 broken internal invariant.
    pub fn exit_code(&self) -> u8 {
        use kronpath::Error as E;
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } => 2,
            CliError::Engine(E::DimensionMismatch { .. } | E::OutOfRange { .. }) => 3,
            CliError::Engine(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}
