use noisefold_dynamics::{
    mean_field_generator, zeeman_coefficients, zeeman_generator_terms, CoherenceRates64, DecayCoefficients64,
    Trajectory64,
};
use noisefold_hamiltonian::{pauli_ops, zeeman_cavity_interaction, Convention, NoiseStrengths};
use noisefold_linalg::{cr, DensityMatrix, SpaceTag, TimeGrid};
use noisefold_noise::{sample_ou_ensemble, GaussianProcessSpec, Kernel, Mode, StochasticEnsemble, Temperature, ThermalBathSpec};
use noisefold_perturbation::GeneratorTerm;

use crate::config::{Experiment, RunConfig};
use crate::CliError;

mod cancellation;
mod convergence;
mod interference;
mod zeeman;

pub use cancellation::{verify_cancellation, verify_y_map};
pub use convergence::{convergence, oracle_compare};
pub use interference::interference_l21;
pub use zeeman::zeeman;

/// One asserted invariant with its measured value.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: String,
    pub passed: bool,
}

impl Check {
    pub fn below(name: &str, measured: f64, limit: f64) -> Self {
        Self { name: name.into(), measured, tolerance: format!("< {limit:e}"), passed: measured < limit }
    }

    pub fn above(name: &str, measured: f64, limit: f64) -> Self {
        Self { name: name.into(), measured, tolerance: format!("> {limit:e}"), passed: measured > limit }
    }

    pub fn equals_zero(name: &str, measured: f64) -> Self {
        Self { name: name.into(), measured, tolerance: "== 0".into(), passed: measured == 0.0 }
    }

    pub fn within(name: &str, measured: f64, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            tolerance: format!("in [{lo}, {hi}]"),
            passed: (lo..=hi).contains(&measured),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub experiment: Experiment,
    pub checks: Vec<Check>,
    pub notes: Vec<(String, String)>,
    pub seeds: Vec<u64>,
    pub trajectory: Option<Trajectory64>,
    /// Second trajectory for comparisons (written as `reference.csv`).
    pub reference: Option<Trajectory64>,
    pub coefficients: Option<(DecayCoefficients64, CoherenceRates64)>,
}

impl Outcome {
    fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            checks: Vec::new(),
            notes: Vec::new(),
            seeds: Vec::new(),
            trajectory: None,
            reference: None,
            coefficients: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.to_string(), value.to_string()));
    }
}

pub fn run_experiment(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    match cfg.experiment {
        Experiment::VerifyCancellation => verify_cancellation(cfg),
        Experiment::VerifyYMap => verify_y_map(cfg),
        Experiment::InterferenceL21 => interference_l21(cfg),
        Experiment::Zeeman => zeeman(cfg),
        Experiment::Convergence => convergence(cfg),
        Experiment::OracleCompare => oracle_compare(cfg),
    }
}

pub(crate) fn grid(cfg: &RunConfig) -> Result<TimeGrid<f64>, CliError> {
    TimeGrid::new(cfg.grid.dt, cfg.grid.n_steps).map_err(|e| CliError::Config(format!("grid: {e}")))
}

pub(crate) fn bath(cfg: &RunConfig) -> Result<ThermalBathSpec<f64>, CliError> {
    let modes = cfg.bath.omega_k.iter().zip(&cfg.bath.g_k).map(|(&omega, &g)| Mode { omega, g }).collect();
    let temperature = Temperature::from_beta(cfg.bath.beta).map_err(|e| CliError::Config(format!("bath.beta: {e}")))?;
    Ok(ThermalBathSpec::new(modes, temperature, cfg.bath.n_max, cfg.bath.omega_0)?)
}

pub(crate) fn strengths(cfg: &RunConfig) -> Result<NoiseStrengths<f64>, CliError> {
    Ok(NoiseStrengths::new(cfg.strengths.lambda, cfg.strengths.delta)?)
}

pub(crate) fn ou_spec(cfg: &RunConfig) -> Result<GaussianProcessSpec<f64>, CliError> {
    Ok(GaussianProcessSpec::new(cfg.noise.sigma, cfg.noise.gamma, cfg.noise.seed)?)
}

/// `R` OU paths shifted by the configured constant mean.
pub(crate) fn ou_ensemble(cfg: &RunConfig, grid: &TimeGrid<f64>) -> Result<StochasticEnsemble<f64>, CliError> {
    let mean = cfg.noise.mean;
    Ok(sample_ou_ensemble(&ou_spec(cfg)?, grid, cfg.noise.r)?.shifted(|_| mean))
}

/// `(|0> + |1>)/sqrt 2`.
pub(crate) fn plus_state() -> DensityMatrix<f64> {
    let a = cr(std::f64::consts::FRAC_1_SQRT_2);
    DensityMatrix::pure(SpaceTag::System, &[a, a]).expect("valid pure state")
}

/// Second-order Zeeman equation: coefficient-built `L_(2,0)`, `L_(0,2)`
/// and, for a nonzero mean, the mean-field `L_(0,1)`.
pub(crate) fn order2_zeeman_generators(
    coeffs: &DecayCoefficients64,
    convention: Convention,
    mean: f64,
) -> Vec<GeneratorTerm<f64>> {
    let mut g: Vec<_> = zeeman_generator_terms(coeffs, convention).into_iter().collect();
    if mean != 0.0 {
        let base = pauli_ops::<f64>(Convention::Paper).sz * cr(0.5);
        g.push(mean_field_generator(&base, &vec![mean; coeffs.len()]));
    }
    g
}

pub(crate) fn analytic_coefficients(cfg: &RunConfig, grid: &TimeGrid<f64>) -> Result<DecayCoefficients64, CliError> {
    let kernel = Kernel::Exponential { sigma: cfg.noise.sigma, gamma: cfg.noise.gamma };
    Ok(zeeman_coefficients(&bath(cfg)?, &kernel, grid)?)
}

pub(crate) fn cavity(cfg: &RunConfig) -> Result<noisefold_hamiltonian::FactorizedInteraction<f64>, CliError> {
    Ok(zeeman_cavity_interaction(&bath(cfg)?, cfg.convention()?)?)
}

/// Five evenly spaced nonzero grid indices ending at the last node.
pub(crate) fn probe_times(n_steps: usize) -> Vec<usize> {
    let mut t: Vec<usize> = (1..=5).map(|k| (k * n_steps) / 5).filter(|&i| i > 0).collect();
    t.dedup();
    t
}
