use qwalk::WalkError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid `{field}`: {message}")]
    Config { field: String, message: String },

    #[error(transparent)]
    Walk(#[from] WalkError),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn config(field: &str, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// 2 for bad input, 3 for a guard violation, 4 for a failed post-selection.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Walk(WalkError::BoundaryViolation { .. }) => 3,
            CliError::Walk(WalkError::PostSelectZeroProbability { .. }) => 4,
            CliError::Walk(_) => 2,
            CliError::Io { .. } => 1,
        }
    }
}
