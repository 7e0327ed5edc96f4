use thiserror::Error;

/// Errors produced by the sensor-placement pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument violated an operation's precondition (shape, range, budget).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Deflation was requested along a direction whose squared norm is below the floor.
    #[error("degenerate direction: squared norm {norm_sq:e} is below floor {floor:e}")]
    DegenerateDirection { norm_sq: f64, floor: f64 },

    /// A pivoted factorization met a zero pivot.
    #[error("matrix is singular at pivot {pivot}")]
    Singular { pivot: usize },

    /// A greedy selection ran out of non-degenerate candidates.
    #[error("candidates exhausted at step {step}: no non-degenerate candidate remains")]
    Exhausted { step: usize },

    /// An iterative solver stopped before reaching its tolerance.
    #[error("no convergence after {iterations} iterations (residual measure {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// Malformed text input.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
