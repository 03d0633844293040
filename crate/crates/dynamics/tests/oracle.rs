use noisefold_dynamics::{
    exact_oracle, integrate_master_equation, zeeman_coefficients, zeeman_generator_terms, DynamicsError,
};
use noisefold_hamiltonian::{stochastic_zeeman, zeeman_cavity_interaction, Convention, NoiseStrengths};
use noisefold_linalg::{c, cr, expm, kron, max_abs, ptrace_env, DensityMatrix, SpaceTag, TimeGrid};
use noisefold_noise::{
    sample_ou_ensemble, thermal_state, GaussianProcessSpec, Kernel, Mode, StochasticEnsemble, Temperature,
    ThermalBathSpec,
};

fn bath(beta: f64, w: f64, g: f64, n_max: usize) -> ThermalBathSpec<f64> {
    ThermalBathSpec::new(vec![Mode { omega: w, g }], Temperature::from_beta(beta).unwrap(), n_max, 1.0).unwrap()
}

fn plus() -> DensityMatrix<f64> {
    DensityMatrix::pure(SpaceTag::System, &[cr(0.5f64.sqrt()), cr(0.5f64.sqrt())]).unwrap()
}

#[test]
fn vanishing_strengths_leave_state_unchanged() {
    let grid = TimeGrid::new(0.1, 20).unwrap();
    let b = bath(1.0, 1.3, 1.0, 3);
    let hi = zeeman_cavity_interaction(&b, Convention::Paper).unwrap();
    let spec = GaussianProcessSpec::new(1.0, 1.0, 7).unwrap();
    let noise = stochastic_zeeman(sample_ou_ensemble(&spec, &grid, 5).unwrap()).unwrap();
    let zero = NoiseStrengths::new(0.0, 0.0).unwrap();
    let traj = exact_oracle(&hi, Some(&noise), &plus(), &thermal_state(&b).unwrap(), &grid, &zero).unwrap();
    for s in traj.states() {
        assert!(max_abs(&(s - plus().matrix())) < 1e-15);
    }
    assert_eq!(traj.meta().realizations, 5);
}

#[test]
fn static_hamiltonian_matches_matrix_exponential() {
    let grid = TimeGrid::new(0.1, 30).unwrap();
    let b = bath(0.7, 1.0, 0.8, 3);
    let hi = zeeman_cavity_interaction(&b, Convention::Paper).unwrap();
    let a0 = 1.7;
    let noise = stochastic_zeeman(StochasticEnsemble::deterministic(&grid, vec![a0; 31]).unwrap()).unwrap();
    let s = NoiseStrengths::new(0.6, 0.4).unwrap();
    let rho_e = thermal_state(&b).unwrap();
    let traj = exact_oracle(&hi, Some(&noise), &plus(), &rho_e, &grid, &s).unwrap();
    let h = hi.h_se(0.0) * cr(0.6) + noise.lifted_base(4) * cr(0.4 * a0);
    let x0 = kron(plus().matrix(), rho_e.matrix());
    for i in [0, 7, 30] {
        let u = expm(&h, c(0.0, -grid.t(i))).unwrap();
        let expect = ptrace_env(&(&u * &x0 * u.adjoint()), 2, 4);
        assert!(max_abs(&(traj.state(i) - expect)) < 1e-12);
    }
    assert!(traj.standard_errors().is_none());
    assert!(traj.diagnostics().max_trace_deviation < 1e-12);
}

#[test]
fn spontaneous_emission_agrees_with_second_order_equation() {
    let excited = DensityMatrix::pure(SpaceTag::System, &[cr(1.0), cr(0.0)]).unwrap();
    let grid = TimeGrid::spanning(2.0, 200).unwrap();
    let b = bath(f64::INFINITY, 1.0, 1.0, 3);
    let hi = zeeman_cavity_interaction(&b, Convention::Paper).unwrap();
    let rho_e = thermal_state(&b).unwrap();
    let coeffs = zeeman_coefficients(&b, &Kernel::Zero, &grid).unwrap();
    let gens = zeeman_generator_terms(&coeffs, Convention::Paper);
    let err = |lam: f64| {
        let s = NoiseStrengths::new(lam, 0.0).unwrap();
        let ex = exact_oracle(&hi, None, &excited, &rho_e, &grid, &s).unwrap();
        let me = integrate_master_equation(&gens, &excited, &grid, &s).unwrap();
        assert!(ex.state(200)[(0, 0)].re < 1.0 - 0.1 * lam * lam);
        ex.max_trace_distance(&me)
    };
    let (e1, e2) = (err(0.1), err(0.05));
    assert!(e1 < 1e-2);
    // at least third order in lambda
    assert!(e1 / e2 > 6.0, "ratio {}", e1 / e2);
}

#[test]
fn ensemble_average_is_thread_count_independent() {
    let grid = TimeGrid::new(0.05, 40).unwrap();
    let b = bath(1.0, 1.3, 1.0, 3);
    let hi = zeeman_cavity_interaction(&b, Convention::Paper).unwrap();
    let spec = GaussianProcessSpec::new(0.8, 1.0, 11).unwrap();
    let noise = stochastic_zeeman(sample_ou_ensemble(&spec, &grid, 70).unwrap()).unwrap();
    let s = NoiseStrengths::new(0.3, 0.5).unwrap();
    let rho_e = thermal_state(&b).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| exact_oracle(&hi, Some(&noise), &plus(), &rho_e, &grid, &s).unwrap())
    };
    let (a, b1) = (run(1), run(3));
    assert_eq!(a.states(), b1.states());
    assert_eq!(a.standard_errors(), b1.standard_errors());
    let se = a.standard_errors().unwrap();
    assert!(se[40][(0, 1)].re > 0.0 && se[0][(0, 1)].re == 0.0);
    assert!(a.trace_distance_error() > 0.0);
}

#[test]
fn dimension_mismatch_is_rejected() {
    let grid = TimeGrid::new(0.1, 4).unwrap();
    let b = bath(1.0, 1.3, 1.0, 3);
    let hi = zeeman_cavity_interaction(&b, Convention::Paper).unwrap();
    let wrong_env = thermal_state(&bath(1.0, 1.3, 1.0, 2)).unwrap();
    let s = NoiseStrengths::new(0.1, 0.0).unwrap();
    assert!(matches!(exact_oracle(&hi, None, &plus(), &wrong_env, &grid, &s), Err(DynamicsError::Dimension(_))));
}
