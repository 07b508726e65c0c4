use std::path::Path;

use steinfit_core::Error as CoreError;

/// A failed command. The exit code separates bad input (2) from numerical
/// trouble (3).
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Quadrature { .. } | CoreError::NonConvergence { .. } | CoreError::BootstrapAborted { .. } => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}
