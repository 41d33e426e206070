use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EspError {
    /// An argument outside the mathematical domain of the operation.
    #[error("{0}")]
    Domain(String),

    /// An argument outside the supported working range (e.g. the oracle guard).
    #[error("{0}")]
    Range(String),

    #[error("invalid solution: {0}")]
    InvalidSolution(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, EspError>;
