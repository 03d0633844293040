use noisefold_hamiltonian::HamiltonianError;
use noisefold_linalg::LinalgError;
use noisefold_noise::NoiseError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PerturbationError {
    #[error("order ({m},{n}) outside the computed range (max total order {max})")]
    OrderOutOfRange { m: usize, n: usize, max: usize },
    #[error("max_order {requested} exceeds configured limit {limit}")]
    OrderLimit { requested: usize, limit: usize },
    #[error("order ({m},{n}) needs second or higher moments; the analytic-mean ensemble only supplies the mean")]
    MeanFieldOrder { m: usize, n: usize },
    #[error("time index {0} was not computed")]
    TimeNotComputed(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
