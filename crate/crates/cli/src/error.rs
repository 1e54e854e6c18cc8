use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at `{path}`: {reason}")]
    Config { path: String, reason: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Csv {
        context: String,
        #[source]
        source: csv::Error,
    },

    #[error("{context}: {source}")]
    Compute {
        context: String,
        #[source]
        source: boxlasso::Error,
    },
}

impl CliError {
    pub fn config(path: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Config {
            path: path.into(),
            reason: reason.into(),
        }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Schema(_) => 2,
            CliError::Io { .. } | CliError::Csv { .. } => 3,
            CliError::Compute { .. } => 4,
        }
    }
}

/// Attaches sweep-point context to a library error.
pub fn at<T>(context: impl FnOnce() -> String, r: boxlasso::Result<T>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Compute {
        context: context(),
        source,
    })
}
