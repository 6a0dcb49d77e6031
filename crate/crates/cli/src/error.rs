use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] qdephase::Error),

    #[error("validation failed")]
    ValidationFailed,
}

impl CliError {
    /// 0 ok, 1 numerical or validation failure, 2 usage or config error, 3 no bracket.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } | CliError::Io { .. } => 2,
            CliError::ValidationFailed => 1,
            CliError::Core(e) => match e {
                qdephase::Error::Domain(_) | qdephase::Error::Divergent(_) => 2,
                qdephase::Error::NonConvergence { .. } | qdephase::Error::Unphysical { .. } => 1,
                qdephase::Error::NoBracket { .. } => 3,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
