use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unsupported config version {0}; this build reads version {1}")]
    Version(u32, u32),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("{0}")]
    Core(#[from] grigwalk::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("missing file {0}")]
    Missing(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn io_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}
