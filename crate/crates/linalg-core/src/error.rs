use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("joint dimension {dim} exceeds cap {cap}")]
    Capacity { dim: usize, cap: usize },
    #[error("non-finite entries in {0}")]
    NonFinite(&'static str),
    #[error("not a density matrix: {0}")]
    NotDensity(String),
    #[error("invalid time grid: {0}")]
    Grid(String),
}
