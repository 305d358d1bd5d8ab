use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A point lies outside the set where an operation is defined.
    #[error("invalid point: {0}")]
    InvalidPoint(String),

    /// A problem, domain or geometry was constructed with inconsistent parameters.
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An inner numerical routine stopped without meeting its tolerance.
    #[error("numerical failure in {routine}: residual {residual:e} after {iterations} iterations")]
    NumericalFailure {
        routine: &'static str,
        residual: f64,
        iterations: usize,
    },

    #[error("estimation failed: {0}")]
    Estimation(String),
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
