use thiserror::Error;

/// Every failure the library can report.
///
/// The variants split into two families that the CLI maps to different exit
/// codes: input/validation problems and solver/capacity problems (see
/// [`Error::is_solver_failure`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index out of range: {what} = {index}, bound {bound}")]
    Index {
        what: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("linear program is infeasible{}", witness.as_ref().map(|w| format!(" ({w})")).unwrap_or_default())]
    Infeasible { witness: Option<String> },

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("state space too large: {states} joint states exceeds limit {limit}")]
    Capacity { states: u128, limit: u128 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures raised by the LP layer or the exact oracle's
    /// capacity guard, as opposed to bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::Infeasible { .. } | Error::Unbounded | Error::Solver(_) | Error::Capacity { .. }
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(std::io::Error::other(e.to_string()))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
