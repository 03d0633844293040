use nalgebra::DVector;
use noisefold_linalg::{
    kron, CMat, Complex, DensityMatrix, Real, SpaceTag, DEFAULT_JOINT_CAP,
};

use crate::{NoiseError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature<T> {
    Finite { beta: T },
    /// `beta = +inf`: every mode in its ground state.
    Zero,
}

impl<T: Real> Temperature<T> {
    /// Maps an infinite `beta` to [`Temperature::Zero`].
    pub fn from_beta(beta: T) -> Result<Self> {
        if beta.is_finite() && beta > T::zero() {
            Ok(Temperature::Finite { beta })
        } else if beta > T::zero() {
            Ok(Temperature::Zero)
        } else {
            Err(NoiseError::Parameter(format!("beta must be > 0, got {beta}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode<T> {
    pub omega: T,
    pub g: T,
}

/// Truncated multimode cavity in a thermal state.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalBathSpec<T> {
    modes: Vec<Mode<T>>,
    temperature: Temperature<T>,
    n_max: usize,
    omega_0: T,
}

impl<T: Real> ThermalBathSpec<T> {
    pub fn new(modes: Vec<Mode<T>>, temperature: Temperature<T>, n_max: usize, omega_0: T) -> Result<Self> {
        if modes.is_empty() {
            return Err(NoiseError::Parameter("bath needs at least one mode".into()));
        }
        if modes.iter().any(|m| !(m.omega > T::zero()) || !m.omega.is_finite() || !m.g.is_finite()) {
            return Err(NoiseError::Parameter("mode frequencies must be positive and finite".into()));
        }
        if n_max == 0 {
            return Err(NoiseError::Parameter("n_max must be >= 1".into()));
        }
        if let Temperature::Finite { beta } = temperature {
            if !(beta > T::zero()) {
                return Err(NoiseError::Parameter(format!("beta must be > 0, got {beta}")));
            }
        }
        if !omega_0.is_finite() {
            return Err(NoiseError::Parameter("omega_0 must be finite".into()));
        }
        let spec = Self { modes, temperature, n_max, omega_0 };
        let dim = spec.env_dim_checked();
        if dim > DEFAULT_JOINT_CAP {
            return Err(NoiseError::Capacity { dim, cap: DEFAULT_JOINT_CAP });
        }
        Ok(spec)
    }

    fn env_dim_checked(&self) -> usize {
        let mut d: usize = 1;
        for _ in &self.modes {
            d = d.saturating_mul(self.n_max + 1);
        }
        d
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim_checked()
    }

    pub fn modes(&self) -> &[Mode<T>] {
        &self.modes
    }

    pub fn temperature(&self) -> Temperature<T> {
        self.temperature
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn omega_0(&self) -> T {
        self.omega_0
    }

    /// Detuning `omega_k - omega_0`.
    pub fn omega_k0(&self, k: usize) -> T {
        self.modes[k].omega - self.omega_0
    }

    fn check_mode(&self, k: usize) -> Result<()> {
        if k >= self.modes.len() {
            return Err(NoiseError::ModeIndex { index: k, count: self.modes.len() });
        }
        Ok(())
    }

    /// Fock populations of mode `k` from the truncated partition sum.
    pub fn populations(&self, k: usize) -> Result<Vec<T>> {
        self.check_mode(k)?;
        let n = self.n_max + 1;
        let w: Vec<T> = match self.temperature {
            Temperature::Zero => (0..n).map(|m| if m == 0 { T::one() } else { T::zero() }).collect(),
            Temperature::Finite { beta } => {
                let x = beta * self.modes[k].omega;
                (0..n).map(|m| (-x * T::from_usize(m).unwrap()).exp()).collect()
            }
        };
        let z = w.iter().fold(T::zero(), |s, &x| s + x);
        Ok(w.into_iter().map(|x| x / z).collect())
    }
}

/// `b_k` embedded in the full environment space (mode 0 outermost).
pub fn annihilation<T: Real>(bath: &ThermalBathSpec<T>, k: usize) -> Result<CMat<T>> {
    bath.check_mode(k)?;
    let n = bath.n_max + 1;
    let mut b = CMat::zeros(n, n);
    for m in 1..n {
        b[(m - 1, m)] = Complex::new(T::from_usize(m).unwrap().sqrt(), T::zero());
    }
    let mut out = CMat::identity(1, 1);
    for q in 0..bath.modes.len() {
        let f = if q == k { b.clone() } else { CMat::identity(n, n) };
        out = kron(&out, &f);
    }
    Ok(out)
}

pub fn thermal_state<T: Real>(bath: &ThermalBathSpec<T>) -> Result<DensityMatrix<T>> {
    let mut diag = vec![T::one()];
    for k in 0..bath.modes.len() {
        let p = bath.populations(k)?;
        diag = diag.iter().flat_map(|&a| p.iter().map(move |&b| a * b)).collect();
    }
    let m = CMat::from_diagonal(&DVector::from_iterator(
        diag.len(),
        diag.into_iter().map(|x| Complex::new(x, T::zero())),
    ));
    Ok(DensityMatrix::from_matrix(SpaceTag::Environment, m)?)
}

/// `N_k = Tr(b_k^dagger b_k rho_E)` on the truncated state.
pub fn mean_occupation<T: Real>(bath: &ThermalBathSpec<T>, k: usize) -> Result<T> {
    let p = bath.populations(k)?;
    Ok(p.iter().enumerate().fold(T::zero(), |s, (m, &x)| s + T::from_usize(m).unwrap() * x))
}

/// `Tr(b_k b_k^dagger rho_E)` on the truncated state. Equals `N_k + 1` only
/// up to the weight of the top Fock level.
pub fn emission_occupation<T: Real>(bath: &ThermalBathSpec<T>, k: usize) -> Result<T> {
    let p = bath.populations(k)?;
    let top = bath.n_max;
    Ok(p.iter()
        .enumerate()
        .take(top)
        .fold(T::zero(), |s, (m, &x)| s + T::from_usize(m + 1).unwrap() * x))
}
