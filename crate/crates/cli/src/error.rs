use std::fmt;
use std::process::ExitCode;

/// A failed run with its exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config file or parameters. Exit 2.
    Config(String),
    /// A residual exceeded its tolerance. Exit 3.
    Verification(String),
    /// The request is well formed but has no answer. Exit 4.
    Refusal(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Refusal(_) => 4,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "error: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Refusal(m) => write!(f, "{m}"),
        }
    }
}

impl From<susyrad::Error> for CliError {
    fn from(e: susyrad::Error) -> Self {
        use susyrad::Error as E;
        match e {
            E::Asymmetric { .. } | E::Shape(_) | E::NotAnEigenvector { .. } => CliError::Verification(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("i/o: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
