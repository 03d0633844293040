use noisefold_hamiltonian::NoiseStrengths;
use noisefold_linalg::{CMat, Real, Superoperator};

use crate::{OrderedMapFamily, PerturbationError, Result};

pub type Order = (usize, usize);

/// Ordered tuples of nonzero orders summing to `(m, n)`.
pub fn compositions(m: usize, n: usize) -> Vec<Vec<Order>> {
    if (m, n) == (0, 0) {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for a in 0..=m {
        for b in 0..=n {
            if (a, b) == (0, 0) {
                continue;
            }
            for mut rest in compositions(m - a, n - b) {
                rest.insert(0, (a, b));
                out.push(rest);
            }
        }
    }
    out
}

/// `L_(M,N)(t_i) = sum over compositions of (-1)^q dE_(first) o E_(second) o ...`.
pub fn collect_generator<T: Real>(fam: &OrderedMapFamily<T>, m: usize, n: usize, i: usize) -> Result<Superoperator<T>> {
    if m + n > fam.max_order() {
        return Err(PerturbationError::OrderOutOfRange { m, n, max: fam.max_order() });
    }
    let d = fam.sys_dim();
    let mut acc = Superoperator::zero(d);
    if (m, n) == (0, 0) {
        return Ok(acc);
    }
    for tuple in compositions(m, n) {
        let (first, rest) = tuple.split_first().expect("nonempty composition");
        let mut term = fam.eps_dot(first.0, first.1, i)?.clone();
        for o in rest {
            term = term.compose(fam.eps(o.0, o.1, i)?);
        }
        if rest.len() % 2 == 1 {
            acc = &acc - &term;
        } else {
            acc += &term;
        }
    }
    Ok(acc)
}

/// Generator of one order on a list of grid indices.
#[derive(Debug, Clone)]
pub struct GeneratorTerm<T: Real> {
    pub order: Order,
    pub times: Vec<usize>,
    pub values: Vec<Superoperator<T>>,
}

impl<T: Real> GeneratorTerm<T> {
    /// Value at grid index `i`, if present.
    pub fn at(&self, i: usize) -> Option<&Superoperator<T>> {
        self.times.binary_search(&i).ok().map(|k| &self.values[k])
    }
}

/// `L_(M,N)` at every time held by `fam`.
pub fn generator_series<T: Real>(fam: &OrderedMapFamily<T>, m: usize, n: usize) -> Result<GeneratorTerm<T>> {
    let values = fam
        .times()
        .iter()
        .map(|&i| collect_generator(fam, m, n, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(GeneratorTerm { order: (m, n), times: fam.times().to_vec(), values })
}

/// `E_t = sum_{(M,N) != (0,0)} lambda^M delta^N E_(M,N)(t_i)` up to the family's order.
pub fn assembled_eps<T: Real>(fam: &OrderedMapFamily<T>, i: usize, s: &NoiseStrengths<T>) -> Result<Superoperator<T>> {
    let d = fam.sys_dim();
    let mut acc = Superoperator::zero(d);
    for total in 1..=fam.max_order() {
        for n in 0..=total {
            let m = total - n;
            let w = s.weight(m, n);
            acc += &fam.eps(m, n, i)?.scaled(w);
        }
    }
    Ok(acc)
}

/// `Y_(Q,t)(rho) = sum_{q=0}^{Q} (-1)^q E_t^q(rho)`.
pub fn y_map<T: Real>(fam: &OrderedMapFamily<T>, q: usize, i: usize, rho: &CMat<T>, s: &NoiseStrengths<T>) -> Result<CMat<T>> {
    let e = assembled_eps(fam, i, s)?;
    let mut term = rho.clone();
    let mut acc = rho.clone();
    for k in 1..=q {
        term = e.apply(&term);
        if k % 2 == 1 {
            acc -= &term;
        } else {
            acc += &term;
        }
    }
    Ok(acc)
}
