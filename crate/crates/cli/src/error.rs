use thiserror::Error;

/// Failures of a command, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable or invalid configuration. Exit code 2.
    #[error("{0}")]
    Config(String),

    /// A verification or convergence check failed. Exit code 1.
    #[error("{0}")]
    Check(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    /// Numerical routine failed on otherwise valid input. Exit code 1.
    #[error(transparent)]
    Numeric(szego_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Check(_) | CliError::Numeric(_) => 1,
        }
    }
}

impl From<szego_core::Error> for CliError {
    fn from(e: szego_core::Error) -> Self {
        use szego_core::Error as E;
        match e {
            E::NotRealValued { .. }
            | E::ZeroOutsideDisk { .. }
            | E::RepeatedZero { .. }
            | E::ZeroMultiplicity
            | E::NoZeros
            | E::ZeroDimension
            | E::InvalidGridSize(_)
            | E::GridTooCoarse { .. }
            | E::Unsupported(_)
            | E::Parse(_) => CliError::Config(e.to_string()),
            other => CliError::Numeric(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
