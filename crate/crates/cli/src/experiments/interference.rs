use noisefold_hamiltonian::stochastic_zeeman;
use noisefold_noise::{thermal_state, StochasticEnsemble};
use noisefold_perturbation::{build_map_family, collect_generator, compositions, l21_closed_form, PerturbationProblem};

use super::{bath, cavity, grid, Check, Outcome};
use crate::config::{Experiment, RunConfig};
use crate::CliError;

/// Cavity coupling plus a deterministic constant classical field: the
/// generic `L_(2,1)` against the connected-correlation closed form.
pub fn interference_l21(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut out = Outcome::new(Experiment::InterferenceL21);
    let grid = grid(cfg)?;
    let bath = bath(cfg)?;
    let interaction = cavity(cfg)?;
    let ens = StochasticEnsemble::deterministic(&grid, vec![cfg.noise.mean; grid.len()])?;
    let noise = stochastic_zeeman(ens)?;
    let rho_e = thermal_state(&bath)?;
    let p = PerturbationProblem::new(&interaction, Some(&noise), &rho_e, &grid, cfg.order)?;
    let n = grid.n_steps();
    let times = vec![n / 2, n];
    let fam = build_map_family(&p, &times)?;
    let (mut min_rel, mut max_disagree) = (f64::INFINITY, 0.0f64);
    for &i in &times {
        let generic = collect_generator(&fam, 2, 1, i)?;
        let mut scale = 0.0;
        for tuple in compositions(2, 1) {
            let (first, rest) = tuple.split_first().expect("nonempty");
            let mut term = fam.eps_dot(first.0, first.1, i)?.clone();
            for o in rest {
                term = term.compose(fam.eps(o.0, o.1, i)?);
            }
            scale += term.max_norm();
        }
        let closed = l21_closed_form(&p, i)?;
        let norm = generic.max_norm();
        let rel = norm / scale;
        let disagree = (&generic - &closed).max_norm() / norm;
        out.note(
            &format!("t index {i}"),
            format!("|L21| {norm:.6e} relative {rel:.6e} paths disagree {disagree:.6e}"),
        );
        min_rel = min_rel.min(rel);
        max_disagree = max_disagree.max(disagree);
    }
    out.checks.push(Check::above("L21 relative norm", min_rel, 1e-3));
    out.checks.push(Check::below("L21 path agreement", max_disagree, 1e-8));
    out.note("classical mean", cfg.noise.mean);
    Ok(out)
}
