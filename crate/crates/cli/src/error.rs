use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("config error at line {line}, field `{field}`: {message}")]
    Config {
        line: usize,
        field: String,
        message: String,
    },
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: eods::Error,
    },
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn file(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::File {
            path: path.into(),
            source,
        }
    }

    pub fn core(context: impl Into<String>, source: eods::Error) -> Self {
        Self::Core {
            context: context.into(),
            source,
        }
    }

    /// Process exit status; 2 is left to argument parsing.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::File { .. } | Self::Csv { .. } | Self::Json(_) => 3,
            Self::Schema(_) => 4,
            Self::Config { .. } => 5,
            Self::Core { source, .. } => match source {
                eods::Error::Domain(_) => 6,
                eods::Error::DegenerateInput(_) => 7,
                eods::Error::InsufficientData(_) => 8,
                eods::Error::Infeasible(_) => 9,
            },
        }
    }
}

impl From<eods::Error> for CliError {
    fn from(source: eods::Error) -> Self {
        Self::core("error", source)
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
