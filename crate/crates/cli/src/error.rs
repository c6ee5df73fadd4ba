//! CLI error channel: validation failures exit with 2, numerical failures
//! with 3.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        Self::Validation(msg.into())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Validation(_) => "validation",
            Self::Numerical(_) => "numerical",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Validation(_) => 2,
            Self::Numerical(_) => 3,
        }
    }
}

/// Wraps a core error raised while computing (after validation passed).
pub fn numerical(err: decoherence_core::Error) -> CliError {
    CliError::Numerical(err.to_string())
}

/// Wraps a core error raised while checking parameters.
pub fn invalid(err: decoherence_core::Error) -> CliError {
    CliError::Validation(err.to_string())
}
