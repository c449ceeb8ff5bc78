use std::path::PathBuf;

/// Errors surfaced by the harness and the command-line tool.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] harmonic_entropy_core::Error),

    /// The simulation config or a command-line value is invalid.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A line of an input file could not be parsed.
    #[error("{path}:{line}: {detail}")]
    Parse {
        path: PathBuf,
        line: usize,
        detail: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 for usage, config and input errors, 3 for I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Io { .. } => 3,
            HarnessError::Json { source, .. } if source.is_io() => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
