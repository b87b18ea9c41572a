use thiserror::Error;

/// Errors raised by capacity construction, integration and the approximation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("atom index {index} out of range for a space of {atoms} atoms")]
    AtomOutOfRange { index: usize, atoms: usize },

    #[error("capacity with {atoms} atoms is too large for exhaustive checking (limit {limit})")]
    CapacityTooLarge { atoms: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point {0:?} lies outside the unit cube")]
    OutOfDomain(Vec<f64>),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn construction(msg: impl Into<String>) -> Self {
        Error::Construction(msg.into())
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
