use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("scenario mismatch: {0}")]
    ScenarioMismatch(String),

    #[error("unsupported topology: {0}")]
    UnsupportedTopology(String),

    #[error("enumeration budget of {budget} evaluations exceeded (partial maximum {partial_max})")]
    BudgetExceeded { budget: u64, partial_max: f64 },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn mismatch(msg: impl Into<String>) -> Self {
        Error::ScenarioMismatch(msg.into())
    }

    /// Process exit status used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 1,
            Error::InvalidArgument(_) | Error::Schema(_) | Error::UnsupportedTopology(_) => 2,
            Error::ScenarioMismatch(_) => 3,
            Error::BudgetExceeded { .. } => 4,
            Error::Internal(_) => 70,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Schema(e.to_string())
    }
}
