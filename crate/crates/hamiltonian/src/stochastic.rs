use noisefold_linalg::ComplexField;
use noisefold_linalg::{kron, CMat, Complex, Real};
use noisefold_noise::{NoiseError, StochasticEnsemble};

use crate::{HamiltonianError, Result};

/// `lambda` scales the system-bath coupling, `delta` the classical noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseStrengths<T> {
    lambda: T,
    delta: T,
}

impl<T: Real> NoiseStrengths<T> {
    pub fn new(lambda: T, delta: T) -> Result<Self> {
        for (name, v) in [("lambda", lambda), ("delta", delta)] {
            if !v.is_finite() || v < T::zero() {
                return Err(HamiltonianError::Strength(format!("{name} must be finite and >= 0")));
            }
        }
        Ok(Self { lambda, delta })
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    /// `lambda^m delta^n`.
    pub fn weight(&self, m: usize, n: usize) -> T {
        self.lambda.powi(m as i32) * self.delta.powi(n as i32)
    }

    pub fn scaled(&self, f: T) -> Self {
        Self { lambda: self.lambda * f, delta: self.delta * f }
    }
}

/// `H_S^(j)(t_i) = a^(j)(t_i) * base`.
#[derive(Debug, Clone)]
pub struct StochasticSystemHamiltonian<T: Real> {
    base: CMat<T>,
    ensemble: StochasticEnsemble<T>,
}

impl<T: Real> StochasticSystemHamiltonian<T> {
    pub fn new(base: CMat<T>, ensemble: StochasticEnsemble<T>) -> Result<Self> {
        if base.nrows() != base.ncols() || base.nrows() == 0 {
            return Err(HamiltonianError::Dimension("base operator must be square".into()));
        }
        let defect = (&base - base.adjoint()).iter().fold(T::zero(), |a, z| a.max(z.modulus()));
        if defect > T::lit(1e-13) {
            return Err(HamiltonianError::NotHermitian { t: 0.0, defect: defect.to_f64_lossy() });
        }
        if ensemble.r() == 0 {
            return Err(NoiseError::EmptyEnsemble.into());
        }
        Ok(Self { base, ensemble })
    }

    pub fn base(&self) -> &CMat<T> {
        &self.base
    }

    pub fn sys_dim(&self) -> usize {
        self.base.nrows()
    }

    pub fn ensemble(&self) -> &StochasticEnsemble<T> {
        &self.ensemble
    }

    pub fn r(&self) -> usize {
        self.ensemble.r()
    }

    pub fn h(&self, j: usize, i: usize) -> CMat<T> {
        &self.base * Complex::new(self.ensemble.value(j, i), T::zero())
    }

    /// Realization average `(1/R) sum_j H_S^(j)(t_i)`.
    pub fn mean(&self, i: usize) -> CMat<T> {
        &self.base * Complex::new(self.ensemble.sample_mean()[i], T::zero())
    }

    /// `base (x) I_E`.
    pub fn lifted_base(&self, env_dim: usize) -> CMat<T> {
        kron(&self.base, &CMat::identity(env_dim, env_dim))
    }

    /// Same base operator over a different ensemble.
    pub fn with_ensemble(&self, ensemble: StochasticEnsemble<T>) -> Self {
        Self { base: self.base.clone(), ensemble }
    }
}
