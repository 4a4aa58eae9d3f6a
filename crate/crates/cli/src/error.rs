use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot decode image {path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("{path}: {detail}")]
    Format { path: PathBuf, detail: String },

    #[error("solver failed: {0}")]
    Solver(#[source] vtctf::Error),

    #[error("invalid experiment: {0}")]
    Invalid(String),

    #[error("cannot write {path}: {detail}")]
    Write { path: PathBuf, detail: String },
}

impl CliError {
    pub(crate) fn format(path: impl Into<PathBuf>, detail: impl Into<String>) -> Self {
        CliError::Format {
            path: path.into(),
            detail: detail.into(),
        }
    }

    pub(crate) fn write(path: impl Into<PathBuf>, detail: impl ToString) -> Self {
        CliError::Write {
            path: path.into(),
            detail: detail.to_string(),
        }
    }

    /// 2 bad arguments, 3 ingestion failure, 4 solver abort, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Image { .. } | CliError::Format { .. } => 3,
            CliError::Solver(_) => 4,
            CliError::Invalid(_) => 2,
            CliError::Write { .. } => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
