use dualgap_core::{Error, ErrorKind};

/// Failure of a command, carrying its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("physics error: {0}")]
    Physics(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Schema(_) => 2,
            CliError::Physics(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }

    /// Prefixes the message with `what`.
    pub fn context(self, what: &str) -> CliError {
        match self {
            CliError::Schema(m) => CliError::Schema(format!("{what}: {m}")),
            CliError::Physics(m) => CliError::Physics(format!("{what}: {m}")),
            CliError::Numerical(m) => CliError::Numerical(format!("{what}: {m}")),
            CliError::Io(m) => CliError::Io(format!("{what}: {m}")),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e.kind() {
            ErrorKind::Domain => CliError::Physics(msg),
            ErrorKind::Numerical => CliError::Numerical(msg),
            ErrorKind::Format => CliError::Schema(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
