use noisefold_hamiltonian::{FactorizedInteraction, SampledInteraction, StochasticSystemHamiltonian};
use noisefold_linalg::{CMat, DensityMatrix, EnvState, Real, TimeGrid};

use crate::{PerturbationError, Result};

pub const DEFAULT_MAX_ORDER: usize = 3;
pub const DEFAULT_ORDER_LIMIT: usize = 4;

/// Everything the expansion needs, evaluated on the grid.
#[derive(Debug, Clone)]
pub struct PerturbationProblem<T: Real> {
    pub(crate) grid: TimeGrid<T>,
    pub(crate) sampled: SampledInteraction<T>,
    pub(crate) sys_dim: usize,
    pub(crate) env_dim: usize,
    pub(crate) env: EnvState<T>,
    /// `a^(j)(t_i)` per realization, with the lifted base operator.
    pub(crate) noise: Option<NoiseData<T>>,
    pub(crate) max_order: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct NoiseData<T: Real> {
    pub base: CMat<T>,
    pub bop: CMat<T>,
    pub paths: Vec<Vec<T>>,
    pub mean_field: bool,
}

impl<T: Real> PerturbationProblem<T> {
    pub fn new(
        interaction: &FactorizedInteraction<T>,
        noise: Option<&StochasticSystemHamiltonian<T>>,
        rho_e: &DensityMatrix<T>,
        grid: &TimeGrid<T>,
        max_order: usize,
    ) -> Result<Self> {
        Self::with_limit(interaction, noise, rho_e, grid, max_order, DEFAULT_ORDER_LIMIT)
    }

    pub fn with_limit(
        interaction: &FactorizedInteraction<T>,
        noise: Option<&StochasticSystemHamiltonian<T>>,
        rho_e: &DensityMatrix<T>,
        grid: &TimeGrid<T>,
        max_order: usize,
        limit: usize,
    ) -> Result<Self> {
        if max_order == 0 || max_order > limit {
            return Err(PerturbationError::OrderLimit { requested: max_order, limit });
        }
        if rho_e.dim() != interaction.env_dim() {
            return Err(PerturbationError::Dimension(format!(
                "environment state has dimension {}, interaction expects {}",
                rho_e.dim(),
                interaction.env_dim()
            )));
        }
        let noise = match noise {
            None => None,
            Some(h) => {
                if h.sys_dim() != interaction.sys_dim() {
                    return Err(PerturbationError::Dimension("noise and coupling system dimensions differ".into()));
                }
                let ens = h.ensemble();
                if ens.grid() != grid {
                    return Err(PerturbationError::Dimension("ensemble sampled on a different grid".into()));
                }
                Some(NoiseData {
                    base: h.base().clone(),
                    bop: h.lifted_base(interaction.env_dim()),
                    paths: (0..ens.r()).map(|j| ens.realization(j).to_vec()).collect(),
                    mean_field: ens.is_mean_field(),
                })
            }
        };
        Ok(Self {
            grid: *grid,
            sampled: interaction.sample(grid)?,
            sys_dim: interaction.sys_dim(),
            env_dim: interaction.env_dim(),
            env: EnvState::new(rho_e.matrix().clone()),
            noise,
            max_order,
        })
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn sys_dim(&self) -> usize {
        self.sys_dim
    }

    pub fn joint_dim(&self) -> usize {
        self.sys_dim * self.env_dim
    }

    pub fn realizations(&self) -> usize {
        self.noise.as_ref().map_or(1, |n| n.paths.len())
    }

    /// Largest noise order with a meaningful ensemble average.
    pub fn max_noise_order(&self) -> usize {
        match &self.noise {
            None => 0,
            Some(n) if n.mean_field => 1.min(self.max_order),
            Some(_) => self.max_order,
        }
    }

    pub fn has_noise(&self) -> bool {
        self.noise.is_some()
    }

    /// Validates that `(m, n)` can be produced.
    pub fn check_order(&self, m: usize, n: usize) -> Result<()> {
        if m + n > self.max_order {
            return Err(PerturbationError::OrderOutOfRange { m, n, max: self.max_order });
        }
        if let Some(nd) = &self.noise {
            if nd.mean_field && n >= 2 {
                return Err(PerturbationError::MeanFieldOrder { m, n });
            }
        }
        Ok(())
    }

    /// Orders `(m, n)` with `m + n <= max_order` that the problem supports.
    pub fn orders(&self) -> Vec<(usize, usize)> {
        let nmax = self.max_noise_order();
        let mut out = Vec::new();
        for total in 0..=self.max_order {
            for n in 0..=total.min(nmax) {
                out.push((total - n, n));
            }
        }
        out
    }

    pub(crate) fn coupling(&self, i: usize) -> &CMat<T> {
        &self.sampled.h[i]
    }

    pub(crate) fn env(&self) -> &EnvState<T> {
        &self.env
    }

    pub fn sampled(&self) -> &SampledInteraction<T> {
        &self.sampled
    }

    pub fn env_state(&self) -> &CMat<T> {
        self.env.matrix()
    }
}
