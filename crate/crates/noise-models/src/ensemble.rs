use nalgebra::DMatrix;
use noisefold_linalg::{Real, TimeGrid};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::{NoiseError, Result};

/// Stationary zero-mean Gaussian process with kernel `sigma^2 exp(-gamma |t - t'|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianProcessSpec<T> {
    sigma: T,
    gamma: T,
    seed: u64,
}

impl<T: Real> GaussianProcessSpec<T> {
    pub fn new(sigma: T, gamma: T, seed: u64) -> Result<Self> {
        if !(sigma >= T::zero()) || !sigma.is_finite() {
            return Err(NoiseError::Parameter(format!("sigma must be >= 0, got {sigma}")));
        }
        if !(gamma > T::zero()) || !gamma.is_finite() {
            return Err(NoiseError::Parameter(format!("gamma must be > 0, got {gamma}")));
        }
        Ok(Self { sigma, gamma, seed })
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn kernel(&self) -> Kernel<T> {
        Kernel::Exponential { sigma: self.sigma, gamma: self.gamma }
    }
}

/// Connected two-time covariance of the classical coefficient.
#[derive(Debug, Clone, PartialEq)]
pub enum Kernel<T: Real> {
    Zero,
    Exponential { sigma: T, gamma: T },
    /// Node-indexed matrix `K[(i, k)]`.
    Empirical(DMatrix<T>),
}

impl<T: Real> Kernel<T> {
    pub fn at(&self, grid: &TimeGrid<T>, i: usize, k: usize) -> T {
        match self {
            Kernel::Zero => T::zero(),
            Kernel::Exponential { sigma, gamma } => {
                let dt = (grid.t(i) - grid.t(k)).abs();
                *sigma * *sigma * (-*gamma * dt).exp()
            }
            Kernel::Empirical(m) => m[(i, k)],
        }
    }
}

/// `R` sampled paths `a^(j)(t_i)` with their analytic statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticEnsemble<T: Real> {
    grid: TimeGrid<T>,
    samples: Vec<Vec<T>>,
    analytic_mean: Vec<T>,
    kernel: Kernel<T>,
    mean_field: bool,
}

/// Exact discrete OU recursion; realization `j` draws from ChaCha stream `j`
/// of `seed`, so results do not depend on scheduling.
pub fn sample_ou_ensemble<T: Real>(
    spec: &GaussianProcessSpec<T>,
    grid: &TimeGrid<T>,
    r: usize,
) -> Result<StochasticEnsemble<T>> {
    if r == 0 {
        return Err(NoiseError::EmptyEnsemble);
    }
    let decay = (-spec.gamma * grid.dt()).exp();
    let kick = spec.sigma * (T::one() - decay * decay).sqrt();
    let n = grid.len();
    let samples: Vec<Vec<T>> = (0..r)
        .into_par_iter()
        .map(|j| {
            let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
            rng.set_stream(j as u64);
            let mut normal = || -> T {
                let x: f64 = StandardNormal.sample(&mut rng);
                T::lit(x)
            };
            let mut path = Vec::with_capacity(n);
            let mut a = spec.sigma * normal();
            path.push(a);
            for _ in 1..n {
                a = a * decay + kick * normal();
                path.push(a);
            }
            path
        })
        .collect();
    Ok(StochasticEnsemble {
        grid: *grid,
        samples,
        analytic_mean: vec![T::zero(); n],
        kernel: spec.kernel(),
        mean_field: false,
    })
}

impl<T: Real> StochasticEnsemble<T> {
    pub fn from_realizations(
        grid: &TimeGrid<T>,
        samples: Vec<Vec<T>>,
        analytic_mean: Vec<T>,
        kernel: Kernel<T>,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(NoiseError::EmptyEnsemble);
        }
        let n = grid.len();
        if analytic_mean.len() != n || samples.iter().any(|s| s.len() != n) {
            return Err(NoiseError::Parameter(format!("every series needs {n} grid values")));
        }
        if samples.iter().flatten().chain(&analytic_mean).any(|x| !x.is_finite()) {
            return Err(NoiseError::Parameter("non-finite sample".into()));
        }
        Ok(Self { grid: *grid, samples, analytic_mean, kernel, mean_field: false })
    }

    /// A single known path: the ensemble of one exact realization.
    pub fn deterministic(grid: &TimeGrid<T>, values: Vec<T>) -> Result<Self> {
        Self::from_realizations(grid, vec![values.clone()], values, Kernel::Zero)
    }

    /// Adds a deterministic mean `mu(t)` to every path and to the analytic mean.
    pub fn shifted<F: Fn(T) -> T>(&self, mu: F) -> Self {
        let shift: Vec<T> = self.grid.points().map(mu).collect();
        let add = |v: &Vec<T>| v.iter().zip(&shift).map(|(a, b)| *a + *b).collect::<Vec<T>>();
        Self {
            grid: self.grid,
            samples: self.samples.iter().map(add).collect(),
            analytic_mean: add(&self.analytic_mean),
            kernel: self.kernel.clone(),
            mean_field: self.mean_field,
        }
    }

    /// One realization equal to the analytic mean. Valid only for quantities
    /// linear in the coefficient; consumers must reject higher orders.
    pub fn analytic_mean_ensemble(&self) -> Self {
        Self {
            grid: self.grid,
            samples: vec![self.analytic_mean.clone()],
            analytic_mean: self.analytic_mean.clone(),
            kernel: self.kernel.clone(),
            mean_field: true,
        }
    }

    pub fn with_kernel(mut self, kernel: Kernel<T>) -> Self {
        self.kernel = kernel;
        self
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn r(&self) -> usize {
        self.samples.len()
    }

    pub fn is_mean_field(&self) -> bool {
        self.mean_field
    }

    pub fn realization(&self, j: usize) -> &[T] {
        &self.samples[j]
    }

    pub fn value(&self, j: usize, i: usize) -> T {
        self.samples[j][i]
    }

    pub fn analytic_mean(&self) -> &[T] {
        &self.analytic_mean
    }

    pub fn kernel(&self) -> &Kernel<T> {
        &self.kernel
    }

    pub fn sample_mean(&self) -> Vec<T> {
        let r = T::from_usize(self.r()).unwrap();
        (0..self.grid.len())
            .map(|i| self.samples.iter().fold(T::zero(), |s, p| s + p[i]) / r)
            .collect()
    }

    /// Empirical connected covariance `mean(a_i a_k) - mean(a_i) mean(a_k)`.
    pub fn empirical_covariance(&self) -> DMatrix<T> {
        let n = self.grid.len();
        let r = T::from_usize(self.r()).unwrap();
        let mean = self.sample_mean();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for k in 0..=i {
                let s = self.samples.iter().fold(T::zero(), |s, p| s + p[i] * p[k]);
                let v = s / r - mean[i] * mean[k];
                m[(i, k)] = v;
                m[(k, i)] = v;
            }
        }
        m
    }

    pub fn empirical_kernel(&self) -> Kernel<T> {
        Kernel::Empirical(self.empirical_covariance())
    }
}
