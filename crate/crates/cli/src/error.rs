use noisefold_dynamics::DynamicsError;
use noisefold_hamiltonian::HamiltonianError;
use noisefold_linalg::LinalgError;
use noisefold_noise::NoiseError;
use noisefold_perturbation::PerturbationError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("io error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("computation failed: {0}")]
    Engine(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Capacity(_) => 4,
            CliError::Io { .. } | CliError::Engine(_) => 1,
        }
    }
}

fn is_capacity_linalg(e: &LinalgError) -> bool {
    matches!(e, LinalgError::Capacity { .. })
}

fn is_capacity_noise(e: &NoiseError) -> bool {
    match e {
        NoiseError::Capacity { .. } => true,
        NoiseError::Linalg(l) => is_capacity_linalg(l),
        _ => false,
    }
}

fn is_capacity_hamiltonian(e: &HamiltonianError) -> bool {
    match e {
        HamiltonianError::Noise(n) => is_capacity_noise(n),
        HamiltonianError::Linalg(l) => is_capacity_linalg(l),
        _ => false,
    }
}

fn is_capacity_perturbation(e: &PerturbationError) -> bool {
    match e {
        PerturbationError::Hamiltonian(h) => is_capacity_hamiltonian(h),
        PerturbationError::Noise(n) => is_capacity_noise(n),
        PerturbationError::Linalg(l) => is_capacity_linalg(l),
        _ => false,
    }
}

fn classify(capacity: bool, msg: String) -> CliError {
    if capacity {
        CliError::Capacity(msg)
    } else {
        CliError::Engine(msg)
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        classify(is_capacity_linalg(&e), e.to_string())
    }
}

impl From<NoiseError> for CliError {
    fn from(e: NoiseError) -> Self {
        match e {
            NoiseError::Parameter(m) => CliError::Config(m),
            e => classify(is_capacity_noise(&e), e.to_string()),
        }
    }
}

impl From<HamiltonianError> for CliError {
    fn from(e: HamiltonianError) -> Self {
        match e {
            HamiltonianError::UnknownConvention(m) => CliError::Config(format!("convention: unknown value {m:?}")),
            HamiltonianError::Strength(m) => CliError::Config(format!("strengths: {m}")),
            e => classify(is_capacity_hamiltonian(&e), e.to_string()),
        }
    }
}

impl From<PerturbationError> for CliError {
    fn from(e: PerturbationError) -> Self {
        match e {
            PerturbationError::OrderLimit { requested, limit } => {
                CliError::Config(format!("order: {requested} exceeds the limit {limit}"))
            }
            e => classify(is_capacity_perturbation(&e), e.to_string()),
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::Convention(m) => CliError::Config(format!("convention: {m}")),
            DynamicsError::Perturbation(p) => p.into(),
            DynamicsError::Hamiltonian(h) => h.into(),
            DynamicsError::Noise(n) => n.into(),
            DynamicsError::Linalg(l) => l.into(),
            e => CliError::Engine(e.to_string()),
        }
    }
}
