use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] horo_core::Error),

    #[error("unknown output format `{0}` (expected dot or json)")]
    BadFormat(String),

    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("walk needs --seed; runs are only reproducible with an explicit seed")]
    MissingSeed,

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn parse(token: &str, reason: impl Into<String>) -> Self {
        CliError::Parse {
            token: token.to_string(),
            reason: reason.into(),
        }
    }

    /// `1` for failures while producing output, `2` for everything the
    /// caller got wrong.
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Io(_) | CliError::Json(_) => ExitCode::from(1),
            _ => ExitCode::from(2),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
