//! CLI errors and their exit codes.

use std::path::PathBuf;

/// Exit code for a completed run whose verification failed.
pub const EXIT_VERIFICATION_FAILED: u8 = 1;
/// Exit code for unreadable, malformed or invalid input.
pub const EXIT_INPUT: u8 = 2;
/// Exit code when the truncation cannot certify the germ.
pub const EXIT_STABILISATION: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    /// Malformed JSON or a field of the wrong type.
    #[error("{origin}: line {line}, column {column}: {field}: {message}")]
    Parse {
        origin: String,
        field: String,
        line: usize,
        column: usize,
        message: String,
    },

    /// Well-formed JSON that violates a `GermFile` invariant.
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },

    #[error(transparent)]
    Core(#[from] glab_core::Error),
}

impl CliError {
    pub fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Invalid {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Core(
                glab_core::Error::StabilisationFailure { .. }
                | glab_core::Error::InsufficientTruncation(_),
            ) => EXIT_STABILISATION,
            _ => EXIT_INPUT,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
