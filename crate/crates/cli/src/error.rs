use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}, line {line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("{path}: {message}")]
    Format { path: String, message: String },
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("unused tolerance override(s): {}", .0.join(", "))]
    UnusedTolerance(Vec<String>),
    #[error(transparent)]
    Core(#[from] cauchylab::Error),
}
