use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("at least {min} points are required, got {got}")]
    TooFewPoints { min: usize, got: usize },

    #[error("points {first} and {second} coincide")]
    DuplicatePoints { first: usize, second: usize },

    #[error("terminal count {got} is outside the supported range {min}..={max}")]
    TerminalCount { got: usize, min: usize, max: usize },

    #[error("fixed-topology solver did not converge after {iterations} sweeps (best length {best})")]
    NotConverged { iterations: usize, best: f64 },

    #[error("unsupported cone: {0}")]
    UnsupportedCone(String),

    #[error("{count} sheet assignments exceed the cap of {cap}")]
    TooManyAssignments { count: u128, cap: usize },
}
