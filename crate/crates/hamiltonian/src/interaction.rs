use std::fmt;
use std::sync::Arc;

use noisefold_linalg::ComplexField;
use noisefold_linalg::{kron, CMat, Real, TimeGrid, DEFAULT_JOINT_CAP};

use crate::{HamiltonianError, Result};

pub type OpFn<T> = Arc<dyn Fn(T) -> CMat<T> + Send + Sync>;

/// One product term `S(t) (x) E(t)`.
#[derive(Clone)]
pub struct Factor<T: Real> {
    pub s: OpFn<T>,
    pub e: OpFn<T>,
}

impl<T: Real> Factor<T> {
    pub fn new<S, E>(s: S, e: E) -> Self
    where
        S: Fn(T) -> CMat<T> + Send + Sync + 'static,
        E: Fn(T) -> CMat<T> + Send + Sync + 'static,
    {
        Self { s: Arc::new(s), e: Arc::new(e) }
    }

    pub fn constant(s: CMat<T>, e: CMat<T>) -> Self {
        Self::new(move |_| s.clone(), move |_| e.clone())
    }
}

impl<T: Real> fmt::Debug for Factor<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Factor")
    }
}

/// `H_SE(t) = sum_n S_n(t) (x) E_n(t)`.
#[derive(Debug, Clone)]
pub struct FactorizedInteraction<T: Real> {
    sys_dim: usize,
    env_dim: usize,
    factors: Vec<Factor<T>>,
}

/// Operators evaluated once on every grid node.
#[derive(Debug, Clone)]
pub struct SampledInteraction<T: Real> {
    pub h: Vec<CMat<T>>,
    pub s: Vec<Vec<CMat<T>>>,
    pub e: Vec<Vec<CMat<T>>>,
}

const PROBE_TIMES: [f64; 4] = [0.0, 0.37, 1.3, 2.9];
const HERMITIAN_TOL: f64 = 1e-13;

impl<T: Real> FactorizedInteraction<T> {
    pub fn new(sys_dim: usize, env_dim: usize, factors: Vec<Factor<T>>) -> Result<Self> {
        let joint = sys_dim.saturating_mul(env_dim);
        if sys_dim == 0 || env_dim == 0 {
            return Err(HamiltonianError::Dimension("empty factor space".into()));
        }
        if joint > DEFAULT_JOINT_CAP {
            return Err(noisefold_linalg::LinalgError::Capacity { dim: joint, cap: DEFAULT_JOINT_CAP }.into());
        }
        let me = Self { sys_dim, env_dim, factors };
        for &t in &PROBE_TIMES {
            let t = T::lit(t);
            for (n, f) in me.factors.iter().enumerate() {
                let (s, e) = ((f.s)(t), (f.e)(t));
                if s.shape() != (sys_dim, sys_dim) || e.shape() != (env_dim, env_dim) {
                    return Err(HamiltonianError::Dimension(format!(
                        "factor {n} has shapes {:?} and {:?}",
                        s.shape(),
                        e.shape()
                    )));
                }
            }
            me.check_hermitian(t)?;
        }
        Ok(me)
    }

    fn check_hermitian(&self, t: T) -> Result<()> {
        let h = self.h_se(t);
        let defect = (&h - h.adjoint()).iter().fold(T::zero(), |a, z| a.max(z.modulus()));
        let scale = h.iter().fold(T::one(), |a, z| a.max(z.modulus()));
        if defect > T::lit(HERMITIAN_TOL) * scale {
            return Err(HamiltonianError::NotHermitian {
                t: t.to_f64_lossy(),
                defect: defect.to_f64_lossy(),
            });
        }
        Ok(())
    }

    pub fn sys_dim(&self) -> usize {
        self.sys_dim
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    pub fn joint_dim(&self) -> usize {
        self.sys_dim * self.env_dim
    }

    pub fn factors(&self) -> &[Factor<T>] {
        &self.factors
    }

    pub fn h_se(&self, t: T) -> CMat<T> {
        let n = self.joint_dim();
        self.factors.iter().fold(CMat::zeros(n, n), |acc, f| acc + kron(&(f.s)(t), &(f.e)(t)))
    }

    /// Evaluates every operator on the grid and checks Hermiticity at each node.
    pub fn sample(&self, grid: &TimeGrid<T>) -> Result<SampledInteraction<T>> {
        let mut h = Vec::with_capacity(grid.len());
        let mut s = vec![Vec::with_capacity(grid.len()); self.factors.len()];
        let mut e = vec![Vec::with_capacity(grid.len()); self.factors.len()];
        let n = self.joint_dim();
        for t in grid.points() {
            let mut acc = CMat::zeros(n, n);
            for (k, f) in self.factors.iter().enumerate() {
                let (sk, ek) = ((f.s)(t), (f.e)(t));
                acc += kron(&sk, &ek);
                s[k].push(sk);
                e[k].push(ek);
            }
            h.push(acc);
        }
        for (i, hi) in h.iter().enumerate() {
            let defect = (hi - hi.adjoint()).iter().fold(T::zero(), |a, z| a.max(z.modulus()));
            let scale = hi.iter().fold(T::one(), |a, z| a.max(z.modulus()));
            if defect > T::lit(HERMITIAN_TOL) * scale {
                return Err(HamiltonianError::NotHermitian {
                    t: grid.t(i).to_f64_lossy(),
                    defect: defect.to_f64_lossy(),
                });
            }
        }
        Ok(SampledInteraction { h, s, e })
    }
}
