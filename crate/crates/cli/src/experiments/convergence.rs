use noisefold_dynamics::{exact_oracle, integrate_master_equation, Trajectory64};
use noisefold_hamiltonian::{stochastic_zeeman, NoiseStrengths};
use noisefold_noise::thermal_state;

use super::{
    analytic_coefficients, bath, cavity, grid, order2_zeeman_generators, ou_ensemble, plus_state, strengths, Check,
    Outcome,
};
use crate::config::{Experiment, RunConfig};
use crate::CliError;

struct Comparison {
    master: Trajectory64,
    oracle: Trajectory64,
    residual: f64,
    mc_error: f64,
}

fn compare(cfg: &RunConfig, s: &NoiseStrengths<f64>) -> Result<Comparison, CliError> {
    let conv = cfg.convention()?;
    let grid = grid(cfg)?;
    let bath = bath(cfg)?;
    let coeffs = analytic_coefficients(cfg, &grid)?;
    let gens = order2_zeeman_generators(&coeffs, conv, cfg.noise.mean);
    let rho0 = plus_state();
    let master = integrate_master_equation(&gens, &rho0, &grid, s)?;
    let noise = stochastic_zeeman(ou_ensemble(cfg, &grid)?)?;
    let oracle = exact_oracle(&cavity(cfg)?, Some(&noise), &rho0, &thermal_state(&bath)?, &grid, s)?
        .with_seeds(vec![cfg.noise.seed]);
    let residual = master.max_trace_distance(&oracle);
    let mc_error = oracle.trace_distance_error();
    Ok(Comparison { master, oracle, residual, mc_error })
}

/// Order-2 equation against the averaged exact evolution at `(lambda, delta)`
/// and `(lambda/2, delta/2)`; the residual is third order, so the ratio is
/// near 8.
pub fn convergence(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut out = Outcome::new(Experiment::Convergence);
    let s = strengths(cfg)?;
    let full = compare(cfg, &s)?;
    let half = compare(cfg, &s.scaled(0.5))?;
    let ratio = full.residual / half.residual;
    out.checks.push(Check::within("error ratio", ratio, 6.0, 10.0));
    for (label, c) in [("full", &full), ("half", &half)] {
        out.checks.push(Check::above(&format!("residual / MC error ({label})"), c.residual / c.mc_error, 10.0));
        out.note(
            &format!("{label} strengths"),
            format!(
                "lambda {:.6e} delta {:.6e} residual {:.6e} MC error {:.6e}",
                c.master.meta().lambda,
                c.master.meta().delta,
                c.residual,
                c.mc_error
            ),
        );
    }
    out.note("classical mean", cfg.noise.mean);
    out.seeds.push(cfg.noise.seed);
    out.trajectory = Some(full.master);
    out.reference = Some(full.oracle);
    Ok(out)
}

pub fn oracle_compare(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut out = Outcome::new(Experiment::OracleCompare);
    let c = compare(cfg, &strengths(cfg)?)?;
    out.checks.push(Check::below("oracle trace deviation", c.oracle.diagnostics().max_trace_deviation, 1e-12));
    out.checks.push(Check::below("master trace deviation", c.master.diagnostics().max_trace_deviation, 1e-10));
    out.note("max trace distance", format!("{:.6e}", c.residual));
    out.note("MC error of distance", format!("{:.6e}", c.mc_error));
    out.note("oracle positivity violations", c.oracle.diagnostics().positivity_violations.len());
    out.note("master min eigenvalue", format!("{:.6e}", c.master.diagnostics().min_eigenvalue));
    out.seeds.push(cfg.noise.seed);
    out.trajectory = Some(c.oracle);
    out.reference = Some(c.master);
    Ok(out)
}
