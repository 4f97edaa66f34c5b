use thiserror::Error;

#[derive(Debug, Error)]
pub enum KitError {
    #[error("line {line}: {message}")]
    Input { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] melnikov_core::Error),

    #[error("numeric: {0}")]
    Numeric(String),

    #[error("{0}")]
    Usage(String),
}

impl KitError {
    pub fn input(line: usize, message: impl Into<String>) -> Self {
        KitError::Input { line, message: message.into() }
    }

    /// Exit status: 2 for problems with the input, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            KitError::Input { .. } | KitError::Io { .. } | KitError::Usage(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, KitError>;
