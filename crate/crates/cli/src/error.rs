use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    /// Malformed JSON or a field of the wrong shape.
    #[error("config error at {path}: {message}")]
    Schema { path: String, message: String },
    /// A well-formed value the model layer rejects.
    #[error("config error at {path}: {source}")]
    Invalid { path: String, source: fadecap::Error },
    #[error("config error at {path}: {reason}")]
    Range { path: String, reason: String },
    #[error(transparent)]
    Core(#[from] fadecap::Error),
}
