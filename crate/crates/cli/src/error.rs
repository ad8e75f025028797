use slopecert_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed input {path}: {source}")]
    Malformed { path: String, source: serde_json::Error },
    #[error("reproduction failed: {0}")]
    Reproduction(String),
    #[error("certificate rejected: {0}")]
    Rejected(String),
}

impl CliError {
    /// 0 success, 1 reproduction failure or rejection, 2 usage, 3 resources.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                CoreError::ResourceCap { .. } | CoreError::NoEngine(_) => 3,
                CoreError::NonIntegral(_) | CoreError::Consistency(_) | CoreError::Inconclusive(_) => 1,
                _ => 2,
            },
            CliError::Usage(_) | CliError::Malformed { .. } => 2,
            CliError::Io { .. } => 2,
            CliError::Reproduction(_) | CliError::Rejected(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn io_error(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}
