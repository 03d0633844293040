//! Configured experiments over the noisefold crates, with CSV, SVG and
//! plain-text report outputs.

pub mod config;
pub mod error;
pub mod experiments;
pub mod instances;
pub mod output;
pub mod plot;

pub use config::{apply_override, Experiment, RunConfig};
pub use error::CliError;
pub use experiments::{run_experiment, Check, Outcome};
pub use output::{write_outputs, COEFFICIENTS_HEADER, TRAJECTORY_HEADER};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_ASSERTION: i32 = 3;
pub const EXIT_CAPACITY: i32 = 4;

/// Environment variable that overrides `noise.seed`.
pub const SEED_ENV: &str = "NOISEFOLD_SEED";
