//! Classical and quantum noise sources: Gaussian ensembles for stochastic
//! Hamiltonian coefficients, thermal cavity states and bath correlations.

pub mod bath;
pub mod correlation;
pub mod ensemble;
pub mod error;

pub use bath::{
    annihilation, emission_occupation, mean_occupation, thermal_state, Mode, Temperature,
    ThermalBathSpec,
};
pub use correlation::{bath_correlation, connected_bath_correlation, expectation};
pub use ensemble::{sample_ou_ensemble, GaussianProcessSpec, Kernel, StochasticEnsemble};
pub use error::NoiseError;

pub type Result<T, E = NoiseError> = std::result::Result<T, E>;

pub type StochasticEnsemble64 = StochasticEnsemble<f64>;
pub type ThermalBathSpec64 = ThermalBathSpec<f64>;
pub type GaussianProcessSpec64 = GaussianProcessSpec<f64>;
