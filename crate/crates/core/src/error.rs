use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{function}: argument {value} outside domain ({expected})")]
    Domain {
        function: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("index {index} exceeds supported maximum {max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(function: &'static str, value: f64, expected: &'static str) -> Error {
    Error::Domain {
        function,
        value,
        expected,
    }
}
