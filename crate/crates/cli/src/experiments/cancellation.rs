use noisefold_hamiltonian::NoiseStrengths;
use noisefold_linalg::{cr, max_abs, CMat, DensityMatrix, SpaceTag};
use noisefold_perturbation::{assembled_eps, build_map_family, collect_generator, y_map, PerturbationProblem};

use super::{bath, grid, probe_times, strengths, Check, Outcome};
use crate::config::{Experiment, RunConfig};
use crate::instances::random_instance;
use crate::CliError;

/// `||L_(1,1)|| / (||dE_(1,1)|| + ||dE_(1,0) E_(0,1)|| + ||dE_(0,1) E_(1,0)||)`,
/// maximized over the probe times.
pub fn verify_cancellation(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut out = Outcome::new(Experiment::VerifyCancellation);
    let grid = grid(cfg)?;
    let bath = bath(cfg)?;
    let times = probe_times(grid.n_steps());
    let mut worst: f64 = 0.0;
    for k in 0..cfg.instances {
        let inst = random_instance(&bath, cfg.noise.sigma, cfg.noise.gamma, cfg.noise.r, &grid, cfg.noise.seed, k)?;
        let p = PerturbationProblem::new(&inst.interaction, Some(&inst.noise), &inst.rho_e, &grid, 2)?;
        let fam = build_map_family(&p, &times)?;
        let mut inst_worst: f64 = 0.0;
        for &i in &times {
            let l11 = collect_generator(&fam, 1, 1, i)?;
            let scale = fam.eps_dot(1, 1, i)?.max_norm()
                + fam.eps_dot(1, 0, i)?.compose(fam.eps(0, 1, i)?).max_norm()
                + fam.eps_dot(0, 1, i)?.compose(fam.eps(1, 0, i)?).max_norm();
            let rel = match (l11.max_norm(), scale) {
                (n, _) if n == 0.0 => 0.0,
                (_, s) if s == 0.0 => f64::INFINITY,
                (n, s) => n / s,
            };
            inst_worst = inst_worst.max(rel);
        }
        worst = worst.max(inst_worst);
        out.note(
            &format!("instance {k}"),
            format!(
                "rho_E {} mean {:+.6e} max relative |L11| {:.6e}",
                if inst.thermal { "thermal" } else { "random" },
                inst.mean,
                inst_worst
            ),
        );
    }
    out.seeds.push(cfg.noise.seed);
    out.note("probe times", format!("{times:?}"));
    out.checks.push(Check::below("L11 relative norm", worst, 1e-10));
    Ok(out)
}

/// `Y_Q(rho_t) = rho_0 + (-1)^Q E^(Q+1)(rho_0)` for the map assembled to the
/// configured order, at the last grid time.
pub fn verify_y_map(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut out = Outcome::new(Experiment::VerifyYMap);
    let grid = grid(cfg)?;
    let bath = bath(cfg)?;
    let inst = random_instance(&bath, cfg.noise.sigma, cfg.noise.gamma, cfg.noise.r, &grid, cfg.noise.seed, 3)?;
    let p = PerturbationProblem::new(&inst.interaction, Some(&inst.noise), &inst.rho_e, &grid, cfg.order)?;
    let i = grid.n_steps();
    let fam = build_map_family(&p, &[i])?;
    let s: NoiseStrengths<f64> = strengths(cfg)?;
    let e = assembled_eps(&fam, i, &s)?;
    let rho0: CMat<f64> = CMat::from_row_slice(2, 2, &[cr(0.8), cr(0.1), cr(0.1), cr(0.2)]);
    DensityMatrix::from_matrix(SpaceTag::System, rho0.clone())?;
    let rho_t = &rho0 + e.apply(&rho0);
    let mut power = rho0.clone();
    for q in 0..=2usize {
        power = e.apply(&power);
        let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
        let y = y_map(&fam, q, i, &rho_t, &s)?;
        let resid = max_abs(&(y - &rho0 - &power * cr(sign)));
        out.checks.push(Check::below(&format!("Y-map residual Q={q}"), resid, 1e-12));
    }
    out.seeds.push(cfg.noise.seed);
    out.note("assembled map max-norm", format!("{:.6e}", e.max_norm()));
    out.note("order", cfg.order);
    Ok(out)
}
