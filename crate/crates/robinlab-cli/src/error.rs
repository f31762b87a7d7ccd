use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{context}: {source}")]
    Module {
        context: String,
        #[source]
        source: robinlab::error::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn module(context: impl Into<String>, source: robinlab::error::Error) -> Self {
        CliError::Module { context: context.into(), source }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Attaches a context string to library errors.
pub trait Context<T> {
    fn ctx(self, context: &str) -> Result<T>;
}

impl<T> Context<T> for robinlab::error::Result<T> {
    fn ctx(self, context: &str) -> Result<T> {
        self.map_err(|e| CliError::module(context, e))
    }
}
