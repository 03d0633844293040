use noisefold_linalg::LinalgError;
use noisefold_noise::NoiseError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HamiltonianError {
    #[error("unknown Pauli convention `{0}` (expected `paper` or `halved`)")]
    UnknownConvention(String),
    #[error("Hamiltonian not Hermitian at t = {t}: defect {defect}")]
    NotHermitian { t: f64, defect: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid strength: {0}")]
    Strength(String),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
