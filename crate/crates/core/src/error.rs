use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FridgeError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error("empty virtual qubit: the chosen levels carry no population")]
    EmptyVirtualQubit,
    #[error("cooling impossible: {0}")]
    CoolingImpossible(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, FridgeError>;

pub(crate) fn domain(msg: impl Into<String>) -> FridgeError {
    FridgeError::Domain(msg.into())
}
