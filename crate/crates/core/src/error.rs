use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported dimension {0}")]
    Dimension(usize),
    #[error("{what} = {got} exceeds the configured cap {cap}")]
    Cap { what: &'static str, got: u64, cap: u64 },
    #[error("term budget of {budget} exceeded at order {order}")]
    Budget { budget: usize, order: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("operator support leaves the region at {0}")]
    OutsideRegion(String),
    #[error("power iteration stalled after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("non-finite entries in matrix")]
    NonFinite,
    #[error(transparent)]
    Io(#[from] IoError),
}

/// `std::io::Error` is neither `Clone` nor `PartialEq`; keep the message only.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("{0}")]
pub struct IoError(pub String);

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(IoError(e.to_string()))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}
