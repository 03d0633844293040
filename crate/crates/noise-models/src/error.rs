use noisefold_linalg::LinalgError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NoiseError {
    #[error("ensemble needs at least one realization")]
    EmptyEnsemble,
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("environment dimension {dim} exceeds cap {cap}")]
    Capacity { dim: usize, cap: usize },
    #[error("mode index {index} out of range ({count} modes)")]
    ModeIndex { index: usize, count: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
