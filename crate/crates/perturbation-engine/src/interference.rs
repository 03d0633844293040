use noisefold_linalg::{CMat, Complex, Real, Superoperator};
use noisefold_noise::{connected_bath_correlation, expectation};

use crate::quadrature::nested_weights;
use crate::{PerturbationProblem, Result};

/// Direct formula for the lowest mixed generator at `t_i`:
///
/// `i int_0^t dt' int_0^t' dt'' sum_mn { C_mn(t,t'') [S_m(t), [Hbar(t'), S_n(t'')] rho]
///   - C_nm(t'',t) [S_m(t), rho [Hbar(t'), S_n(t'')]] }`
///
/// with connected bath correlations `C`. The double integral uses the same
/// piecewise-linear interpolation as the propagator terms.
pub fn l21_closed_form<T: Real>(problem: &PerturbationProblem<T>, i: usize) -> Result<Superoperator<T>> {
    let d = problem.sys_dim();
    let Some(nd) = &problem.noise else {
        return Ok(Superoperator::zero(d));
    };
    let r = T::from_usize(nd.paths.len()).unwrap();
    let n_nodes = problem.grid().len();
    let abar: Vec<T> = (0..n_nodes)
        .map(|k| nd.paths.iter().fold(T::zero(), |s, p| s + p[k]) / r)
        .collect();
    let w = nested_weights(&abar, problem.grid().dt(), i);
    let s = &problem.sampled.s;
    let e = &problem.sampled.e;
    let rho_e = problem.env_state();
    let nf = s.len();
    let mean_now: Vec<Complex<T>> = (0..nf).map(|m| expectation(&e[m][i], rho_e)).collect();

    // (coefficient, S_m(t), X) for rho -> c [S_m, X rho] and rho -> c' [S_m, rho X]
    let mut left: Vec<(Complex<T>, &CMat<T>, CMat<T>)> = Vec::new();
    let mut right: Vec<(Complex<T>, &CMat<T>, CMat<T>)> = Vec::new();
    for (k, &wk) in w.iter().enumerate() {
        if wk == T::zero() {
            continue;
        }
        let hk = &nd.base * Complex::new(wk, T::zero());
        for n in 0..nf {
            let x = &hk * &s[n][k] - &s[n][k] * &hk;
            let mean_k = expectation(&e[n][k], rho_e);
            for m in 0..nf {
                let c_mn = connected_bath_correlation(&e[m][i], &e[n][k], rho_e);
                let c_nm = (&e[n][k] * (&e[m][i] * rho_e)).trace() - mean_k * mean_now[m];
                left.push((c_mn, &s[m][i], x.clone()));
                right.push((c_nm, &s[m][i], x.clone()));
            }
        }
    }
    let iu = Complex::new(T::zero(), T::one());
    Ok(Superoperator::from_action(d, |rho| {
        let mut acc = CMat::zeros(d, d);
        for (c, sm, x) in &left {
            let xr = x * rho;
            acc += (*sm * &xr - &xr * *sm) * *c;
        }
        for (c, sm, x) in &right {
            let rx = rho * x;
            acc -= (*sm * &rx - &rx * *sm) * *c;
        }
        acc * iu
    }))
}
