//! Randomized coupling instances: a two-level system, one truncated cavity
//! mode, a random factorized Hermitian coupling, an OU-driven random system
//! operator and a thermal or random environment state.

use std::sync::Arc;

use noisefold_hamiltonian::{Factor, FactorizedInteraction, StochasticSystemHamiltonian};
use noisefold_linalg::{c, cr, CMat, Complex, DensityMatrix, SpaceTag, TimeGrid};
use noisefold_noise::{annihilation, sample_ou_ensemble, thermal_state, GaussianProcessSpec, ThermalBathSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::CliError;

pub struct RandomInstance {
    pub interaction: FactorizedInteraction<f64>,
    pub noise: StochasticSystemHamiltonian<f64>,
    pub rho_e: DensityMatrix<f64>,
    pub thermal: bool,
    pub mean: f64,
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMat<f64> {
    CMat::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMat<f64> {
    let a = random_matrix(rng, n);
    (&a + a.adjoint()) * cr(0.5)
}

/// Instance `k` of the family seeded by `seed`. Even `k` use the thermal
/// cavity state, odd `k` a random full-rank state; `k mod 4 < 2` gives a
/// zero-mean classical coefficient, the rest a random nonzero mean.
pub fn random_instance(
    bath: &ThermalBathSpec<f64>,
    sigma: f64,
    gamma: f64,
    r: usize,
    grid: &TimeGrid<f64>,
    seed: u64,
    k: usize,
) -> Result<RandomInstance, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    let de = bath.env_dim();
    let b = annihilation(bath, 0)?;
    let s = random_matrix(&mut rng, 2);
    let extra = random_matrix(&mut rng, de) * cr(0.3);
    let g = bath.modes()[0].g.max(0.1);
    let w = bath.omega_k0(0);
    let e = Arc::new(move |t: f64| (&b + &extra) * (Complex::new(0.0, -w * t).exp() * g));
    let e2 = e.clone();
    let sd = s.adjoint();
    let sh = random_hermitian(&mut rng, 2);
    let eh = random_hermitian(&mut rng, de) * cr(0.2 * g);
    let nu: f64 = rng.random_range(0.3..1.5);
    let factors = vec![
        Factor::new(move |_| s.clone(), move |t| e(t)),
        Factor::new(move |_| sd.clone(), move |t| e2(t).adjoint()),
        Factor::new(move |_| sh.clone(), move |t: f64| &eh * cr((nu * t).cos())),
    ];
    let interaction = FactorizedInteraction::new(2, de, factors)?;
    let thermal = k % 2 == 0;
    let rho_e = if thermal {
        thermal_state(bath)?
    } else {
        let a = random_matrix(&mut rng, de);
        let p = &a * a.adjoint() + CMat::identity(de, de) * cr(0.05);
        let tr = p.trace();
        DensityMatrix::from_matrix(SpaceTag::Environment, p / tr)?
    };
    let mean = if k % 4 < 2 { 0.0 } else { rng.random_range(0.5..1.5) * if rng.random::<bool>() { 1.0 } else { -1.0 } };
    let spec = GaussianProcessSpec::new(sigma, gamma, seed.wrapping_add(k as u64))?;
    let ens = sample_ou_ensemble(&spec, grid, r)?.shifted(|_| mean);
    let noise = StochasticSystemHamiltonian::new(random_hermitian(&mut rng, 2), ens)?;
    Ok(RandomInstance { interaction, noise, rho_e, thermal, mean })
}
