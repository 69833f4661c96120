use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request is well-formed but exceeds what an exact method can handle.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// An iterative eigensolver ran out of iterations. The last estimate is kept
    /// so callers can decide whether it is good enough.
    #[error("eigensolver did not converge after {iterations} iterations (last eigenvalue {last_value}, residual {residual:e})")]
    Convergence {
        iterations: usize,
        last_value: f64,
        residual: f64,
        last_vector: Vec<f64>,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization: {0}")]
    Serialize(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Precondition(_) | Error::Parse { .. } => 2,
            Error::Capacity(_) | Error::Convergence { .. } => 3,
            Error::Io(_) | Error::Serialize(_) => 4,
        }
    }
}
