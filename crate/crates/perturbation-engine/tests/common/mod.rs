#![allow(dead_code)]

use noisefold_hamiltonian::{Factor, FactorizedInteraction, StochasticSystemHamiltonian};
use noisefold_linalg::{c, cr, CMat, Complex, DensityMatrix, SpaceTag, TimeGrid};
use noisefold_noise::{sample_ou_ensemble, GaussianProcessSpec, StochasticEnsemble};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMat<f64> {
    CMat::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMat<f64> {
    let a = random_matrix(rng, n);
    (&a + a.adjoint()) * cr(0.5)
}

pub fn random_density(rng: &mut ChaCha8Rng, n: usize) -> CMat<f64> {
    let a = random_matrix(rng, n);
    let p = &a * a.adjoint();
    let tr = p.trace();
    p / tr
}

pub fn env_state(m: CMat<f64>) -> DensityMatrix<f64> {
    DensityMatrix::from_matrix(SpaceTag::Environment, m).unwrap()
}

/// Random Hermitian coupling: an adjoint pair with oscillating bath parts
/// plus one Hermitian product term.
pub fn random_interaction(rng: &mut ChaCha8Rng, d: usize, de: usize) -> FactorizedInteraction<f64> {
    let s = random_matrix(rng, d);
    let e0 = random_matrix(rng, de);
    let e1 = random_matrix(rng, de);
    let w: f64 = rng.random_range(0.2..1.5);
    let sh = random_hermitian(rng, d);
    let eh = random_hermitian(rng, de);
    let sd = s.adjoint();
    let e = move |t: f64| (&e0 * Complex::new(0.0, -w * t).exp() + &e1 * cr((0.7 * t).sin())) * cr(0.6);
    let e = std::sync::Arc::new(e);
    let e2 = e.clone();
    let f1 = Factor::new(move |_| s.clone(), move |t| e(t));
    let f2 = Factor::new(move |_| sd.clone(), move |t| e2(t).adjoint());
    let f3 = Factor::new(move |_| sh.clone(), move |t: f64| &eh * cr(0.4 * (1.0 + 0.5 * t.cos())));
    FactorizedInteraction::new(d, de, vec![f1, f2, f3]).unwrap()
}

pub fn random_noise(
    rng: &mut ChaCha8Rng,
    grid: &TimeGrid<f64>,
    d: usize,
    r: usize,
    mean: f64,
) -> StochasticSystemHamiltonian<f64> {
    let spec = GaussianProcessSpec::new(rng.random_range(0.3..1.2), rng.random_range(0.5..2.0), rng.random()).unwrap();
    let ens = sample_ou_ensemble(&spec, grid, r).unwrap().shifted(|t| mean * (1.0 + 0.3 * t.sin()));
    StochasticSystemHamiltonian::new(random_hermitian(rng, d), ens).unwrap()
}

pub fn deterministic_noise(grid: &TimeGrid<f64>, base: CMat<f64>, f: impl Fn(f64) -> f64) -> StochasticSystemHamiltonian<f64> {
    let ens = StochasticEnsemble::deterministic(grid, grid.points().map(f).collect()).unwrap();
    StochasticSystemHamiltonian::new(base, ens).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    a / b.max(f64::MIN_POSITIVE)
}
