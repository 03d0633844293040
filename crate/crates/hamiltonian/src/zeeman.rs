use noisefold_linalg::ComplexField;
use noisefold_linalg::{cr, CMat, Complex, Real};
use noisefold_noise::{annihilation, StochasticEnsemble, ThermalBathSpec};

use crate::{pauli_ops, Convention, Factor, FactorizedInteraction, Result, StochasticSystemHamiltonian};

/// Rotating-wave cavity coupling: `S_1 = sigma_+`,
/// `E_1(t) = sum_k g_k e^{-i w_k0 t} b_k`, `S_2 = sigma_-`, `E_2 = E_1^dagger`.
/// Couplings are taken real.
pub fn zeeman_cavity_interaction<T: Real>(
    bath: &ThermalBathSpec<T>,
    convention: Convention,
) -> Result<FactorizedInteraction<T>> {
    let p = pauli_ops::<T>(convention);
    let modes: Vec<(T, CMat<T>)> = (0..bath.modes().len())
        .map(|k| Ok((bath.omega_k0(k), annihilation(bath, k)? * Complex::new(bath.modes()[k].g, T::zero()))))
        .collect::<std::result::Result<_, noisefold_noise::NoiseError>>()?;
    let env_dim = bath.env_dim();
    let e1 = move |t: T| {
        modes.iter().fold(CMat::zeros(env_dim, env_dim), |acc, (w, gb)| {
            let phase = Complex::new(T::zero(), -*w * t).exp();
            acc + gb * phase
        })
    };
    let e1 = std::sync::Arc::new(e1);
    let e1b = e1.clone();
    let (sp, sm) = (p.sp, p.sm);
    let f1 = Factor::new(move |_| sp.clone(), move |t| e1(t));
    let f2 = Factor::new(move |_| sm.clone(), move |t| e1b(t).adjoint());
    FactorizedInteraction::new(2, env_dim, vec![f1, f2])
}

/// `H_S^(j)(t) = a^(j)(t) sigma_z / 2`.
pub fn stochastic_zeeman<T: Real>(ensemble: StochasticEnsemble<T>) -> Result<StochasticSystemHamiltonian<T>> {
    let sz = pauli_ops::<T>(Convention::Paper).sz;
    StochasticSystemHamiltonian::new(sz * cr::<T>(0.5), ensemble)
}
