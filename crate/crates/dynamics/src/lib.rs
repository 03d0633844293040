//! Time evolution: RK4 integration of truncated time-local master
//! equations, a brute-force joint-unitary ensemble oracle, and the decay
//! analysis of a two-level atom in a thermal cavity with a fluctuating
//! Zeeman field.

pub mod error;
pub mod master;
pub mod oracle;
pub mod trajectory;
pub mod zeeman;

pub use error::DynamicsError;
pub use master::{integrate_master_equation, mean_field_generator, BLOWUP_NORM, SYMMETRIZATION_LIMIT, TRACE_LIMIT};
pub use oracle::{exact_oracle, JOINT_TRACE_LIMIT, UNITARITY_LIMIT};
pub use trajectory::{Diagnostics, Trajectory, TrajectoryMeta, POSITIVITY_TOLERANCE};
pub use zeeman::{
    coherence_coupling_defect, coherence_decay_analysis, zeeman_coefficients, zeeman_eom_generator,
    zeeman_generator_terms, CoherenceRates, DecayCoefficients,
};

pub type Result<T, E = DynamicsError> = std::result::Result<T, E>;

pub type Trajectory64 = Trajectory<f64>;
pub type DecayCoefficients64 = DecayCoefficients<f64>;
pub type CoherenceRates64 = CoherenceRates<f64>;
