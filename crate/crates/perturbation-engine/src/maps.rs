use std::collections::HashMap;

use noisefold_linalg::{CMat, EnvState, Real, Superoperator, TimeGrid};
use rayon::prelude::*;

use crate::propagator::{
    advance_noisy, advance_shared, cell_kernels, derivative_table, initial_noisy, initial_shared,
    term_table, Terms,
};
use crate::{PerturbationError, PerturbationProblem, PropagatorTerms, Result};

/// Realizations summed sequentially inside one chunk before the pairwise
/// reduction; fixed so results do not depend on the worker count.
const REDUCTION_CHUNK: usize = 16;

/// Averaged maps `E_(M,N)(t_i)` and their exact time derivatives.
#[derive(Debug, Clone)]
pub struct OrderedMapFamily<T: Real> {
    grid: TimeGrid<T>,
    d: usize,
    max_order: usize,
    mean_field: bool,
    has_noise: bool,
    times: Vec<usize>,
    eps: HashMap<(usize, usize, usize), Superoperator<T>>,
    eps_dot: HashMap<(usize, usize, usize), Superoperator<T>>,
    identity: Superoperator<T>,
    zero: Superoperator<T>,
}

impl<T: Real> OrderedMapFamily<T> {
    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn sys_dim(&self) -> usize {
        self.d
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn times(&self) -> &[usize] {
        &self.times
    }

    fn check(&self, m: usize, n: usize, i: usize) -> Result<()> {
        if m + n > self.max_order {
            return Err(PerturbationError::OrderOutOfRange { m, n, max: self.max_order });
        }
        if self.mean_field && n >= 2 {
            return Err(PerturbationError::MeanFieldOrder { m, n });
        }
        if self.times.binary_search(&i).is_err() {
            return Err(PerturbationError::TimeNotComputed(i));
        }
        Ok(())
    }

    pub fn eps(&self, m: usize, n: usize, i: usize) -> Result<&Superoperator<T>> {
        self.check(m, n, i)?;
        if (m, n) == (0, 0) {
            return Ok(&self.identity);
        }
        if n >= 1 && !self.has_noise {
            return Ok(&self.zero);
        }
        Ok(&self.eps[&(m, n, i)])
    }

    pub fn eps_dot(&self, m: usize, n: usize, i: usize) -> Result<&Superoperator<T>> {
        self.check(m, n, i)?;
        if (m, n) == (0, 0) || (n >= 1 && !self.has_noise) {
            return Ok(&self.zero);
        }
        Ok(&self.eps_dot[&(m, n, i)])
    }
}

/// `sum_{m<=M, n<=N} Tr_E(U_(M-m,N-n) (rho (x) rho_E) U_(m,n)^dagger)`.
fn add_eps<T: Real>(acc: &mut Superoperator<T>, big_m: usize, big_n: usize, u: &Terms<T>, env: &EnvState<T>) {
    for m in 0..=big_m {
        for n in 0..=big_n {
            acc.add_trace_sandwich(&u[big_m - m][big_n - n], &u[m][n], env);
        }
    }
}

/// Product rule applied to [`add_eps`].
fn add_eps_dot<T: Real>(
    acc: &mut Superoperator<T>,
    big_m: usize,
    big_n: usize,
    u: &Terms<T>,
    v: &Terms<T>,
    env: &EnvState<T>,
) {
    for m in 0..=big_m {
        for n in 0..=big_n {
            acc.add_trace_sandwich(&v[big_m - m][big_n - n], &u[m][n], env);
            acc.add_trace_sandwich(&u[big_m - m][big_n - n], &v[m][n], env);
        }
    }
}

fn zero_padded<T: Real>(mut t: Terms<T>, max_order: usize, dim: usize) -> Terms<T> {
    for (m, row) in t.iter_mut().enumerate() {
        while row.len() < max_order - m + 1 {
            row.push(CMat::zeros(dim, dim));
        }
    }
    t
}

/// `E_(M,N)(t_i)` from stored terms.
pub fn epsilon_map<T: Real>(terms: &PropagatorTerms<T>, big_m: usize, big_n: usize, i: usize) -> Result<Superoperator<T>> {
    let p = terms.problem();
    p.check_order(big_m, big_n)?;
    let d = p.sys_dim();
    if (big_m, big_n) == (0, 0) {
        return Ok(Superoperator::identity(d));
    }
    let r = terms.realizations();
    let parts: Vec<Superoperator<T>> = (0..r)
        .map(|j| {
            let mut acc = Superoperator::zero(d);
            let u = zero_padded(terms.table(j, i), p.max_order(), p.joint_dim());
            add_eps(&mut acc, big_m, big_n, &u, p.env());
            acc
        })
        .collect();
    Ok(average(parts, r))
}

/// `dE_(M,N)/dt` at `t_i` from stored terms, via the product rule.
pub fn epsilon_dot_map<T: Real>(terms: &PropagatorTerms<T>, big_m: usize, big_n: usize, i: usize) -> Result<Superoperator<T>> {
    let p = terms.problem();
    p.check_order(big_m, big_n)?;
    let d = p.sys_dim();
    let r = terms.realizations();
    let parts: Vec<Superoperator<T>> = (0..r)
        .map(|j| {
            let mut acc = Superoperator::zero(d);
            let u = zero_padded(terms.table(j, i), p.max_order(), p.joint_dim());
            let v = zero_padded(terms.derivative_table(j, i), p.max_order(), p.joint_dim());
            add_eps_dot(&mut acc, big_m, big_n, &u, &v, p.env());
            acc
        })
        .collect();
    Ok(average(parts, r))
}

fn pairwise_sum<T: Real>(mut v: Vec<Vec<Superoperator<T>>>) -> Vec<Superoperator<T>> {
    while v.len() > 1 {
        let mut next = Vec::with_capacity(v.len().div_ceil(2));
        let mut it = v.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                for (x, y) in a.iter_mut().zip(&b) {
                    *x += y;
                }
            }
            next.push(a);
        }
        v = next;
    }
    v.pop().unwrap_or_default()
}

fn average<T: Real>(parts: Vec<Superoperator<T>>, r: usize) -> Superoperator<T> {
    let chunks: Vec<Vec<Superoperator<T>>> = parts
        .chunks(REDUCTION_CHUNK)
        .map(|c| {
            let mut acc = c[0].clone();
            for x in &c[1..] {
                acc += x;
            }
            vec![acc]
        })
        .collect();
    let s = pairwise_sum(chunks).pop().expect("at least one realization");
    s.scaled(T::one() / T::from_usize(r).unwrap())
}

/// Builds `E_(M,N)` and `dE_(M,N)/dt` for every supported order at the
/// requested grid indices, sweeping all realizations through time together.
pub fn build_map_family<T: Real>(problem: &PerturbationProblem<T>, times: &[usize]) -> Result<OrderedMapFamily<T>> {
    let mut times: Vec<usize> = times.to_vec();
    times.sort_unstable();
    times.dedup();
    let last = times.last().copied().unwrap_or(0);
    if last > problem.grid.n_steps() {
        return Err(PerturbationError::TimeNotComputed(last));
    }
    let d = problem.sys_dim();
    let orders = problem.orders();
    let shared_orders: Vec<(usize, usize)> = orders.iter().copied().filter(|&(m, n)| n == 0 && m > 0).collect();
    let noisy_orders: Vec<(usize, usize)> = orders.iter().copied().filter(|&(_, n)| n > 0).collect();
    let env = problem.env();

    let mut fam = OrderedMapFamily {
        grid: problem.grid,
        d,
        max_order: problem.max_order,
        mean_field: problem.noise.as_ref().is_some_and(|n| n.mean_field),
        has_noise: problem.has_noise(),
        times: times.clone(),
        eps: HashMap::new(),
        eps_dot: HashMap::new(),
        identity: Superoperator::identity(d),
        zero: Superoperator::zero(d),
    };

    let mut shared = initial_shared(problem);
    let r = if problem.has_noise() { problem.realizations() } else { 0 };
    let mut states: Vec<Terms<T>> = (0..r).map(|_| initial_noisy(problem)).collect();

    let record = |i: usize, shared: &[CMat<T>], states: &[Terms<T>], fam: &mut OrderedMapFamily<T>| {
        let h = problem.coupling(i);
        let u0 = term_table(shared, None);
        let v0 = derivative_table(h, None, &u0);
        for &(m, n) in &shared_orders {
            let mut e = Superoperator::zero(d);
            add_eps(&mut e, m, n, &u0, env);
            let mut ed = Superoperator::zero(d);
            add_eps_dot(&mut ed, m, n, &u0, &v0, env);
            fam.eps.insert((m, n, i), e);
            fam.eps_dot.insert((m, n, i), ed);
        }
        let Some(nd) = &problem.noise else { return };
        let chunks: Vec<Vec<Superoperator<T>>> = states
            .par_chunks(REDUCTION_CHUNK)
            .enumerate()
            .map(|(c, chunk)| {
                let mut acc: Vec<Superoperator<T>> = vec![Superoperator::zero(d); 2 * noisy_orders.len()];
                for (off, st) in chunk.iter().enumerate() {
                    let j = c * REDUCTION_CHUNK + off;
                    let u = term_table(shared, Some(st));
                    let v = derivative_table(h, Some((&nd.bop, nd.paths[j][i])), &u);
                    for (k, &(m, n)) in noisy_orders.iter().enumerate() {
                        add_eps(&mut acc[2 * k], m, n, &u, env);
                        add_eps_dot(&mut acc[2 * k + 1], m, n, &u, &v, env);
                    }
                }
                acc
            })
            .collect();
        let inv_r = T::one() / T::from_usize(states.len()).unwrap();
        let total = pairwise_sum(chunks);
        for (k, &(m, n)) in noisy_orders.iter().enumerate() {
            fam.eps.insert((m, n, i), total[2 * k].scaled(inv_r));
            fam.eps_dot.insert((m, n, i), total[2 * k + 1].scaled(inv_r));
        }
    };

    let mut next = 0;
    if times.first() == Some(&0) {
        record(0, &shared, &states, &mut fam);
        next = 1;
    }
    for i in 0..last {
        let k = cell_kernels(problem, i);
        let prev = shared.clone();
        advance_shared(&mut shared, &k);
        if let Some(nd) = &problem.noise {
            states.par_iter_mut().enumerate().for_each(|(j, st)| {
                advance_noisy(st, &prev, &k, nd.paths[j][i], nd.paths[j][i + 1]);
            });
        }
        if next < times.len() && times[next] == i + 1 {
            record(i + 1, &shared, &states, &mut fam);
            next += 1;
        }
    }
    Ok(fam)
}
