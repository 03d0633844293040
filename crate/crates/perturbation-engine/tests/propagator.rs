mod common;

use common::*;
use noisefold_hamiltonian::{Factor, FactorizedInteraction};
use noisefold_linalg::{c, cr, expm, kron, max_abs, CMat, TimeGrid};
use noisefold_perturbation::{compute_propagator_terms, PerturbationProblem};

fn op_norm(m: &CMat<f64>) -> f64 {
    m.clone().singular_values()[0]
}

#[test]
fn first_order_term_is_trapezoid_integral() {
    let grid = TimeGrid::new(0.1, 12).unwrap();
    let mut g = rng(3);
    let hi = random_interaction(&mut g, 2, 2);
    let rho_e = env_state(random_density(&mut g, 2));
    let p = PerturbationProblem::new(&hi, None, &rho_e, &grid, 2).unwrap();
    let terms = compute_propagator_terms(&p).unwrap();
    for i in [0, 5, 12] {
        let w = grid.trapezoid_weights(i);
        let mut acc = CMat::zeros(4, 4);
        for (k, wk) in w.iter().enumerate() {
            acc += hi.h_se(grid.t(k)) * cr(*wk);
        }
        let expect = acc * c(0.0, -1.0);
        assert!(max_abs(&(terms.get(1, 0, 0, i).unwrap() - expect)) < 1e-14);
    }
    assert_eq!(terms.get(0, 0, 0, 0).unwrap(), CMat::identity(4, 4));
    assert_eq!(max_abs(&terms.get(2, 0, 0, 0).unwrap()), 0.0);
}

#[test]
fn empty_grid_keeps_identity() {
    let grid = TimeGrid::new(0.1, 0).unwrap();
    let mut g = rng(4);
    let hi = random_interaction(&mut g, 2, 2);
    let noise = random_noise(&mut g, &grid, 2, 2, 0.3);
    let rho_e = env_state(random_density(&mut g, 2));
    let p = PerturbationProblem::new(&hi, Some(&noise), &rho_e, &grid, 3).unwrap();
    let terms = compute_propagator_terms(&p).unwrap();
    assert_eq!(terms.get(0, 0, 1, 0).unwrap(), CMat::identity(4, 4));
    for (m, n) in p.orders().into_iter().filter(|o| *o != (0, 0)) {
        assert_eq!(max_abs(&terms.get(m, n, 1, 0).unwrap()), 0.0);
    }
}

#[test]
fn constant_coupling_series_matches_exponential() {
    let mut g = rng(8);
    let h = random_hermitian(&mut g, 4);
    let (s, e) = (h.clone(), CMat::identity(1, 1));
    let hi = FactorizedInteraction::new(4, 1, vec![Factor::constant(s, e)]).unwrap();
    let rho_e = env_state(CMat::identity(1, 1));
    let grid = TimeGrid::new(0.05, 20).unwrap();
    for p_order in [1usize, 2, 3] {
        let p = PerturbationProblem::new(&hi, None, &rho_e, &grid, p_order).unwrap();
        let terms = compute_propagator_terms(&p).unwrap();
        for lam in [0.3, 0.15] {
            let t = grid.t(20);
            let mut series = CMat::zeros(4, 4);
            for m in 0..=p_order {
                series += terms.get(m, 0, 0, 20).unwrap() * cr(f64::powi(lam, m as i32));
            }
            let exact = expm(&h, c(0.0, -lam * t)).unwrap();
            let err = op_norm(&(series - exact));
            let x = lam * op_norm(&h) * t;
            let fact: f64 = (1..=p_order + 1).map(|k| k as f64).product();
            let bound = x.powi(p_order as i32 + 1) / fact * x.exp();
            assert!(err <= bound, "P={p_order} lam={lam}: {err:e} > {bound:e}");
            assert!(err > 0.05 * bound / x.exp());
        }
    }
}

/// Reference propagator of the piecewise-linear interpolated Hamiltonian by
/// fine midpoint stepping.
fn fine_propagator(
    hi: &FactorizedInteraction<f64>,
    base: &CMat<f64>,
    a: &[f64],
    grid: &TimeGrid<f64>,
    lam: f64,
    del: f64,
    sub: usize,
) -> CMat<f64> {
    let de = hi.env_dim();
    let bl = kron(base, &CMat::identity(de, de));
    let mut u = CMat::identity(hi.joint_dim(), hi.joint_dim());
    let h = grid.dt() / sub as f64;
    for i in 0..grid.n_steps() {
        let (h0, h1) = (hi.h_se(grid.t(i)), hi.h_se(grid.t(i + 1)));
        for s in 0..sub {
            let u_frac = (s as f64 + 0.5) / sub as f64;
            let hs = (&h0 * cr(1.0 - u_frac) + &h1 * cr(u_frac)) * cr(lam)
                + &bl * cr(del * (a[i] * (1.0 - u_frac) + a[i + 1] * u_frac));
            u = expm(&hs, c(0.0, -h)).unwrap() * u;
        }
    }
    u
}

#[test]
fn truncation_error_scales_with_order() {
    let grid = TimeGrid::new(0.1, 8).unwrap();
    let mut g = rng(12);
    let hi = random_interaction(&mut g, 2, 2);
    let base = random_hermitian(&mut g, 2);
    let a: Vec<f64> = grid.points().map(|t: f64| 0.8 + 0.5 * (1.3 * t).sin()).collect();
    let noise = deterministic_noise(&grid, base.clone(), |t: f64| 0.8 + 0.5 * (1.3 * t).sin());
    let rho_e = env_state(random_density(&mut g, 2));
    for p_order in [1usize, 2, 3] {
        let p = PerturbationProblem::new(&hi, Some(&noise), &rho_e, &grid, p_order).unwrap();
        let terms = compute_propagator_terms(&p).unwrap();
        let err = |eps: f64| {
            let mut series = CMat::zeros(4, 4);
            for (m, n) in p.orders() {
                series += terms.get(m, n, 0, 8).unwrap() * cr(eps.powi((m + n) as i32));
            }
            let exact = fine_propagator(&hi, &base, &a, &grid, eps, eps, 100);
            op_norm(&(series - exact))
        };
        let ratio = err(0.1) / err(0.05);
        let target = 2f64.powi(p_order as i32 + 1);
        assert!((ratio / target - 1.0).abs() < 0.2, "P={p_order}: ratio {ratio} vs {target}");
    }
}
