use std::path::PathBuf;

use qarch_core::QarchError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Core(#[from] QarchError),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Core(e) => e.kind(),
        }
    }

    /// One exit code per error class; 1 is left for panics.
    pub fn exit_code(&self) -> u8 {
        match self.kind() {
            "usage" => 2,
            "io" => 3,
            "parse" => 4,
            "invalid-argument" => 5,
            "size-limit" => 6,
            "generation-failed" => 7,
            "candidate-failed" => 8,
            _ => 1,
        }
    }

    /// `error kind=<kind> message="<escaped>"`, always a single line.
    pub fn render(&self) -> String {
        format!("error kind={} message={:?}", self.kind(), self.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
