//! Two-parameter Dyson expansion of the joint propagator in the coupling
//! strength `lambda` and classical-noise strength `delta`, the averaged
//! reduced maps `E_(M,N)`, and order-by-order generators `L_(M,N)` of the
//! time-local equation of motion.
//!
//! Quadrature: inside each grid cell every Hamiltonian is interpolated
//! linearly and the cell's Dyson terms are integrated exactly. Single
//! integrals therefore coincide with the trapezoid rule, each truncated order
//! stays consistent with unitarity, and algebraic identities between maps
//! survive discretization up to rounding.

pub mod error;
pub mod generator;
pub mod interference;
pub mod maps;
pub mod problem;
pub mod propagator;
pub mod quadrature;

pub use error::PerturbationError;
pub use generator::{
    assembled_eps, collect_generator, compositions, generator_series, y_map, GeneratorTerm, Order,
};
pub use interference::l21_closed_form;
pub use maps::{build_map_family, epsilon_dot_map, epsilon_map, OrderedMapFamily};
pub use problem::{PerturbationProblem, DEFAULT_MAX_ORDER, DEFAULT_ORDER_LIMIT};
pub use propagator::{compute_propagator_terms, PropagatorTerms};

pub type Result<T, E = PerturbationError> = std::result::Result<T, E>;

pub type PerturbationProblem64 = PerturbationProblem<f64>;
pub type OrderedMapFamily64 = OrderedMapFamily<f64>;
pub type GeneratorTerm64 = GeneratorTerm<f64>;
