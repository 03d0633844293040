use noisefold_hamiltonian::HamiltonianError;
use noisefold_linalg::LinalgError;
use noisefold_noise::NoiseError;
use noisefold_perturbation::PerturbationError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("generator does not match grid: {0}")]
    GridMismatch(String),
    #[error("state blow-up at step {step}: norm {norm:e}")]
    Instability { step: usize, norm: f64 },
    #[error("hermitian correction {correction:e} at step {step} exceeds 1e-8")]
    Symmetrization { step: usize, correction: f64 },
    #[error("trace drift {deviation:e} at step {step}")]
    TraceDrift { step: usize, deviation: f64 },
    #[error("unitarity defect {defect:e} at step {step}")]
    Unitarity { step: usize, defect: f64 },
    #[error("non-finite state at step {0}")]
    NonFinite(usize),
    #[error("convention mismatch: {0}")]
    Convention(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Perturbation(#[from] PerturbationError),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
