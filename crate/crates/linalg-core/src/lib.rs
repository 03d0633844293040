//! Complex dense linear algebra for small open-system simulations.
//!
//! Operators are column-major `nalgebra` matrices of `Complex<T>`. Vectorization
//! stacks columns, so entry `(a, b)` of a `d x d` operator lands at index
//! `a + d * b`. Joint spaces order the system index outermost: basis state
//! `|a> (x) |m>` has index `a * env_dim + m`.

pub mod density;
pub mod error;
pub mod expm;
pub mod grid;
pub mod operator;
pub mod scalar;
pub mod superop;

pub use density::{min_eigenvalue, trace_distance, DensityMatrix, DEFAULT_TOLERANCE};
pub use error::LinalgError;
pub use expm::{connected_blocks, expm, hermitian_expm, matrix_exp};
pub use grid::TimeGrid;
pub use operator::{
    hermiticity_defect, kron, max_abs, partial_trace_env, ptrace_env, tensor_product, tensor_product_capped, Operator,
    SpaceTag, DEFAULT_JOINT_CAP,
};
pub use nalgebra;
pub use nalgebra::ComplexField;
pub use scalar::{c, cr, CMat, Complex, Real};
pub use superop::{EnvState, Superoperator};

pub type Result<T, E = LinalgError> = std::result::Result<T, E>;

/// Double-precision aliases.
pub type Operator64 = Operator<f64>;
pub type Superoperator64 = Superoperator<f64>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type TimeGrid64 = TimeGrid<f64>;
