use noisefold_linalg::{CMat, Complex, Real, TimeGrid};
use rayon::prelude::*;

use crate::quadrature::CellKernels;
use crate::{PerturbationProblem, Result};

/// Terms `[m][n]`; in per-realization state the `n = 0` slots are empty
/// because those terms are shared.
pub(crate) type Terms<T> = Vec<Vec<CMat<T>>>;

pub(crate) fn cell_kernels<T: Real>(p: &PerturbationProblem<T>, i: usize) -> CellKernels<T> {
    let bop = p.noise.as_ref().map(|n| &n.bop);
    CellKernels::new(
        p.coupling(i),
        p.coupling(i + 1),
        bop,
        p.grid.dt(),
        p.max_order,
        p.max_noise_order(),
    )
}

pub(crate) fn initial_shared<T: Real>(p: &PerturbationProblem<T>) -> Vec<CMat<T>> {
    let d = p.joint_dim();
    (0..=p.max_order)
        .map(|m| if m == 0 { CMat::identity(d, d) } else { CMat::zeros(d, d) })
        .collect()
}

pub(crate) fn initial_noisy<T: Real>(p: &PerturbationProblem<T>) -> Terms<T> {
    let d = p.joint_dim();
    let nmax = p.max_noise_order();
    (0..=p.max_order)
        .map(|m| {
            (0..=nmax.min(p.max_order - m))
                .map(|n| if n == 0 { CMat::zeros(0, 0) } else { CMat::zeros(d, d) })
                .collect()
        })
        .collect()
}

/// `U_(M,0)(t_{i+1}) = sum_m G_(m,0) U_(M-m,0)(t_i)`.
pub(crate) fn advance_shared<T: Real>(shared: &mut [CMat<T>], k: &CellKernels<T>) {
    let p = shared.len() - 1;
    let old = shared.to_vec();
    for big_m in 1..=p {
        let mut acc = old[big_m].clone();
        for m in 1..=big_m {
            acc += k.shared(m) * &old[big_m - m];
        }
        shared[big_m] = acc;
    }
}

/// Advances the noise-carrying terms of one realization. `shared_old` holds
/// the shared terms at the start of the cell.
pub(crate) fn advance_noisy<T: Real>(
    state: &mut Terms<T>,
    shared_old: &[CMat<T>],
    k: &CellKernels<T>,
    a0: T,
    a1: T,
) {
    let p = state.len() - 1;
    let g: Vec<Vec<CMat<T>>> = (0..=p)
        .map(|m| {
            (0..state[m].len())
                .map(|n| if n >= 1 { k.g(m, n, a0, a1) } else { CMat::zeros(0, 0) })
                .collect()
        })
        .collect();
    let old = state.clone();
    let get = |x: usize, y: usize| -> &CMat<T> { if y == 0 { &shared_old[x] } else { &old[x][y] } };
    for big_m in 0..=p {
        for big_n in 1..state[big_m].len() {
            let mut acc = old[big_m][big_n].clone();
            for m in 0..=big_m {
                for n in 0..=big_n {
                    if m == 0 && n == 0 {
                        continue;
                    }
                    let gmn = if n == 0 { k.shared(m) } else { &g[m][n] };
                    acc += gmn * get(big_m - m, big_n - n);
                }
            }
            state[big_m][big_n] = acc;
        }
    }
}

/// `V_(m,n) = -i (H_SE U_(m-1,n) + a B U_(m,n-1))` for every entry of `u`.
pub(crate) fn derivative_table<T: Real>(h: &CMat<T>, bop: Option<(&CMat<T>, T)>, u: &Terms<T>) -> Terms<T> {
    let mi = Complex::new(T::zero(), -T::one());
    let dim = h.nrows();
    (0..u.len())
        .map(|m| {
            (0..u[m].len())
                .map(|n| {
                    let mut acc = CMat::zeros(dim, dim);
                    if m >= 1 {
                        acc += h * &u[m - 1][n];
                    }
                    if n >= 1 {
                        if let Some((b, a)) = bop {
                            acc += b * &u[m][n - 1] * Complex::new(a, T::zero());
                        }
                    }
                    acc * mi
                })
                .collect()
        })
        .collect()
}

/// Full `[m][n]` table from shared and per-realization terms.
pub(crate) fn term_table<T: Real>(shared: &[CMat<T>], noisy: Option<&Terms<T>>) -> Terms<T> {
    (0..shared.len())
        .map(|m| {
            let width = noisy.map_or(1, |st| st[m].len());
            (0..width)
                .map(|n| if n == 0 { shared[m].clone() } else { noisy.unwrap()[m][n].clone() })
                .collect()
        })
        .collect()
}

/// All propagator terms `U_(m,n)^(j)(t_i)` held in memory.
#[derive(Debug, Clone)]
pub struct PropagatorTerms<T: Real> {
    problem: PerturbationProblem<T>,
    shared: Vec<Vec<CMat<T>>>,
    noisy: Vec<Vec<Terms<T>>>,
}

/// Steps every realization through the grid, keeping all terms.
pub fn compute_propagator_terms<T: Real>(problem: &PerturbationProblem<T>) -> Result<PropagatorTerms<T>> {
    let n_steps = problem.grid.n_steps();
    let mut shared = vec![initial_shared(problem)];
    let r = if problem.has_noise() { problem.realizations() } else { 0 };
    let mut noisy: Vec<Vec<Terms<T>>> = (0..r).map(|_| vec![initial_noisy(problem)]).collect();
    for i in 0..n_steps {
        let k = cell_kernels(problem, i);
        let prev = shared[i].clone();
        let mut next = prev.clone();
        advance_shared(&mut next, &k);
        if let Some(nd) = &problem.noise {
            noisy.par_iter_mut().enumerate().for_each(|(j, hist)| {
                let mut st = hist[i].clone();
                advance_noisy(&mut st, &prev, &k, nd.paths[j][i], nd.paths[j][i + 1]);
                hist.push(st);
            });
        }
        shared.push(next);
    }
    Ok(PropagatorTerms { problem: problem.clone(), shared, noisy })
}

impl<T: Real> PropagatorTerms<T> {
    pub fn problem(&self) -> &PerturbationProblem<T> {
        &self.problem
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.problem.grid
    }

    pub fn max_order(&self) -> usize {
        self.problem.max_order
    }

    pub fn realizations(&self) -> usize {
        self.noisy.len().max(1)
    }

    /// `U_(m,n)^(j)(t_i)`; terms with `n >= 1` are zero without classical noise.
    pub fn get(&self, m: usize, n: usize, j: usize, i: usize) -> Result<CMat<T>> {
        self.problem.check_order(m, n)?;
        if n == 0 {
            return Ok(self.shared[i][m].clone());
        }
        if self.noisy.is_empty() || n >= self.noisy[j][i][m].len() {
            let d = self.problem.joint_dim();
            return Ok(CMat::zeros(d, d));
        }
        Ok(self.noisy[j][i][m][n].clone())
    }

    /// Table of `U_(m,n)^(j)(t_i)` over all supported orders.
    pub(crate) fn table(&self, j: usize, i: usize) -> Terms<T> {
        term_table(&self.shared[i], self.noisy.get(j).map(|h| &h[i]))
    }

    /// Table of `-i (H_SE(t_i) U_(m-1,n) + H_S^(j)(t_i) U_(m,n-1))`.
    pub(crate) fn derivative_table(&self, j: usize, i: usize) -> Terms<T> {
        let u = self.table(j, i);
        let bop = self.problem.noise.as_ref().map(|nd| (&nd.bop, nd.paths[j][i]));
        derivative_table(self.problem.coupling(i), bop, &u)
    }

    /// `dU_(m,n)^(j)/dt` at `t_i`.
    pub fn derivative(&self, m: usize, n: usize, j: usize, i: usize) -> Result<CMat<T>> {
        self.problem.check_order(m, n)?;
        let v = self.derivative_table(j, i);
        Ok(v[m].get(n).cloned().unwrap_or_else(|| {
            let d = self.problem.joint_dim();
            CMat::zeros(d, d)
        }))
    }
}
