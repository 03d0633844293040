//! Interaction-picture Hamiltonians with `hbar = 1`.
//!
//! The total interaction is `lambda H_SE(t) + delta H_S^(j)(t) (x) I_E`, with
//! `H_SE(t) = sum_n S_n(t) (x) E_n(t)` and `H_S^(j)(t) = a^(j)(t) * base`.

pub mod error;
pub mod interaction;
pub mod pauli;
pub mod stochastic;
pub mod zeeman;

pub use error::HamiltonianError;
pub use interaction::{Factor, FactorizedInteraction, OpFn, SampledInteraction};
pub use pauli::{pauli_ops, Convention, PauliOps};
pub use stochastic::{NoiseStrengths, StochasticSystemHamiltonian};
pub use zeeman::{stochastic_zeeman, zeeman_cavity_interaction};

pub type Result<T, E = HamiltonianError> = std::result::Result<T, E>;

pub type FactorizedInteraction64 = FactorizedInteraction<f64>;
pub type StochasticSystemHamiltonian64 = StochasticSystemHamiltonian<f64>;
pub type NoiseStrengths64 = NoiseStrengths<f64>;
