use noisefold_dynamics::{
    coherence_coupling_defect, coherence_decay_analysis, integrate_master_equation, zeeman_coefficients,
    zeeman_eom_generator,
};
use noisefold_hamiltonian::{stochastic_zeeman, Convention};
use noisefold_noise::thermal_state;
use noisefold_perturbation::{build_map_family, collect_generator, PerturbationProblem};

use super::{
    analytic_coefficients, bath, cavity, grid, order2_zeeman_generators, ou_ensemble, plus_state, strengths, Check,
    Outcome,
};
use crate::config::{Experiment, RunConfig};
use crate::CliError;

/// Decay coefficients, rates and the second-order trajectory of the atom in
/// the thermal cavity with a fluctuating field, cross-checked against the
/// generic engine.
pub fn zeeman(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut out = Outcome::new(Experiment::Zeeman);
    let conv = cfg.convention()?;
    let grid = grid(cfg)?;
    let bath = bath(cfg)?;
    let s = strengths(cfg)?;
    let coeffs = analytic_coefficients(cfg, &grid)?;
    let scaled = coeffs.with_strengths(&s);
    let rates = coherence_decay_analysis(&scaled, conv, cfg.rescale)?;
    out.checks.push(Check::equals_zero("rate additivity defect", rates.additivity_defect()));
    let min_dc = scaled.min_d_c();
    out.checks.push(Check {
        name: "D_C nonnegative".into(),
        measured: min_dc,
        tolerance: ">= 0".into(),
        passed: min_dc >= 0.0,
    });

    let rho0 = plus_state();
    let gens = order2_zeeman_generators(&coeffs, conv, cfg.noise.mean);
    let traj = integrate_master_equation(&gens, &rho0, &grid, &s)?;
    let predicted = rates.predicted_rho01(rho0.matrix()[(0, 1)]);
    let coherence_err = traj
        .rho01()
        .iter()
        .zip(&predicted)
        .fold(0.0f64, |m, (a, b)| m.max((a.norm() - b.norm()).abs()));
    out.checks.push(Check::below("|rho01| vs exp(-int D_total)", coherence_err, 1e-8));
    out.checks.push(Check::below("trace deviation", traj.diagnostics().max_trace_deviation, 1e-10));
    let herm = traj
        .states()
        .iter()
        .fold(0.0f64, |m, r| m.max((r[(1, 0)] - r[(0, 1)].conj()).norm()));
    out.checks.push(Check::equals_zero("rho10 - conj(rho01)", herm));
    let coupling = (0..grid.len())
        .map(|i| coherence_coupling_defect(&zeeman_eom_generator(&scaled, i, conv)))
        .fold(0.0f64, f64::max);
    out.checks.push(Check::below("population-coherence coupling", coupling, 1e-12));

    // engine path on the sampled ensemble, coefficients from its empirical kernel
    let ens = ou_ensemble(cfg, &grid)?;
    let kernel = ens.empirical_kernel();
    let emp = zeeman_coefficients(&bath, &kernel, &grid)?.with_strengths(&s);
    let noise = stochastic_zeeman(ens)?;
    let interaction = cavity(cfg)?;
    let rho_e = thermal_state(&bath)?;
    let p = PerturbationProblem::new(&interaction, Some(&noise), &rho_e, &grid, 2)?;
    let n = grid.n_steps();
    let mut times: Vec<usize> = [n / 3, (2 * n) / 3, n].into_iter().filter(|&i| i > 0).collect();
    times.dedup();
    let fam = build_map_family(&p, &times)?;
    let (l2, d2) = (s.lambda() * s.lambda(), s.delta() * s.delta());
    let mut engine_diff = 0.0f64;
    for &i in &times {
        let engine = &collect_generator(&fam, 2, 0, i)?.scaled(l2) + &collect_generator(&fam, 0, 2, i)?.scaled(d2);
        engine_diff = engine_diff.max((&engine - &zeeman_eom_generator(&emp, i, conv)).max_norm());
    }
    out.checks.push(Check::below("engine vs coefficient generator", engine_diff, 1e-8));
    let dc_gap = emp.d_c.iter().zip(&scaled.d_c).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));

    let prefactor = conv.ladder_scale() * conv.ladder_scale();
    out.note("cavity decay prefactor", prefactor);
    out.note("dephasing decay prefactor", 4.0);
    if conv == Convention::Halved {
        out.note("rescale", "halved ladder operators: cavity rates are 1/4 of the paper-convention rates");
    }
    out.note("empirical minus analytic D_C (max)", format!("{dc_gap:.6e}"));
    out.note("engine comparison times", format!("{times:?}"));
    out.note("final |rho01|", format!("{:.16e}", traj.rho01().last().map_or(0.0, |z| z.norm())));
    out.note("min eigenvalue", format!("{:.6e}", traj.diagnostics().min_eigenvalue));
    out.note("positivity violations", traj.diagnostics().positivity_violations.len());
    out.seeds.push(cfg.noise.seed);
    out.trajectory = Some(traj);
    out.coefficients = Some((scaled, rates));
    Ok(out)
}
