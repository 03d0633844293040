use noisefold_dynamics::{
    coherence_coupling_defect, coherence_decay_analysis, zeeman_coefficients, zeeman_eom_generator, DynamicsError,
};
use noisefold_hamiltonian::{pauli_ops, stochastic_zeeman, zeeman_cavity_interaction, Convention, NoiseStrengths};
use noisefold_linalg::{cr, CMat, Superoperator, TimeGrid};
use noisefold_noise::{
    emission_occupation, mean_occupation, sample_ou_ensemble, thermal_state, GaussianProcessSpec, Kernel, Mode,
    Temperature, ThermalBathSpec,
};
use noisefold_perturbation::{build_map_family, collect_generator, PerturbationProblem};

fn bath(beta: f64, w: f64, g: f64, n_max: usize) -> ThermalBathSpec<f64> {
    ThermalBathSpec::new(vec![Mode { omega: w, g }], Temperature::from_beta(beta).unwrap(), n_max, 1.0).unwrap()
}

#[test]
fn coefficients_vanish_at_start() {
    let grid = TimeGrid::new(0.1, 10).unwrap();
    let c = zeeman_coefficients(&bath(1.0, 1.3, 0.8, 4), &Kernel::Exponential { sigma: 1.0, gamma: 1.0 }, &grid).unwrap();
    for v in [&c.d_r, &c.d_i, &c.dp_r, &c.dp_i, &c.d_c] {
        assert_eq!(v[0], 0.0);
    }
    assert!(c.min_d_c() >= 0.0);
}

#[test]
fn ou_dephasing_coefficient_converges_quadratically() {
    let (sigma, gamma) = (0.9, 1.7);
    let exact = |t: f64| sigma * sigma * (1.0 - (-gamma * t).exp()) / (4.0 * gamma);
    let err = |n: usize| {
        let grid = TimeGrid::spanning(2.0, n).unwrap();
        let c = zeeman_coefficients(&bath(1.0, 1.0, 0.0, 1), &Kernel::Exponential { sigma, gamma }, &grid).unwrap();
        (0..=n).map(|i| (c.d_c[i] - exact(grid.t(i))).abs()).fold(0.0, f64::max)
    };
    let (e1, e2) = (err(50), err(100));
    assert!(e1 < 1e-3);
    assert!((e1 / e2 - 4.0).abs() < 0.2, "ratio {}", e1 / e2);
}

#[test]
fn resonant_mode_gives_linear_absorption_rate() {
    let grid = TimeGrid::new(0.05, 40).unwrap();
    let b = bath(0.8, 1.0, 0.6, 6);
    let c = zeeman_coefficients(&b, &Kernel::Zero, &grid).unwrap();
    let nbar = mean_occupation(&b, 0).unwrap();
    let emit = emission_occupation(&b, 0).unwrap();
    for i in 0..=40 {
        let t = grid.t(i);
        assert!((c.d_r[i] - 0.36 * nbar * t).abs() < 1e-14);
        assert!((c.dp_r[i] - 0.36 * emit * t).abs() < 1e-14);
        assert_eq!(c.d_i[i], 0.0);
        assert_eq!(c.d_c[i], 0.0);
    }
}

#[test]
fn zero_temperature_keeps_only_emission() {
    let grid = TimeGrid::new(0.05, 40).unwrap();
    let b = bath(f64::INFINITY, 1.3, 0.6, 4);
    let c = zeeman_coefficients(&b, &Kernel::Zero, &grid).unwrap();
    assert!(c.d_r.iter().chain(&c.d_i).all(|&x| x == 0.0));
    assert!(c.dp_r[40] > 0.0 && c.dp_i[40] != 0.0);
}

#[test]
fn generator_special_cases() {
    let grid = TimeGrid::new(0.1, 10).unwrap();
    let mut c = zeeman_coefficients(&bath(1.0, 1.0, 0.0, 1), &Kernel::Zero, &grid).unwrap();
    assert_eq!(zeeman_eom_generator(&c, 5, Convention::Paper).max_norm(), 0.0);
    c.d_c[5] = 0.3;
    let l = zeeman_eom_generator(&c, 5, Convention::Paper);
    let sz = pauli_ops::<f64>(Convention::Paper).sz;
    let expect = Superoperator::from_action(2, |r| (r - &sz * r * &sz) * cr(-0.6));
    assert!((&l - &expect).max_norm() < 1e-15);
}

fn engine_vs_coefficients(beta: f64, omega: f64, seed: u64) -> f64 {
    let grid = TimeGrid::new(0.05, 40).unwrap();
    let b = bath(beta, omega, 0.7, 4);
    let interaction = zeeman_cavity_interaction(&b, Convention::Paper).unwrap();
    let spec = GaussianProcessSpec::new(0.6, 1.2, seed).unwrap();
    let ens = sample_ou_ensemble(&spec, &grid, 24).unwrap().shifted(|_| 0.4);
    let kernel = ens.empirical_kernel();
    let noise = stochastic_zeeman(ens).unwrap();
    let rho_e = thermal_state(&b).unwrap();
    let p = PerturbationProblem::new(&interaction, Some(&noise), &rho_e, &grid, 2).unwrap();
    let times = [10, 25, 40];
    let fam = build_map_family(&p, &times).unwrap();
    let s = NoiseStrengths::new(0.4, 0.3).unwrap();
    let coeffs = zeeman_coefficients(&b, &kernel, &grid).unwrap().with_strengths(&s);
    let mut worst: f64 = 0.0;
    for i in times {
        let engine = &collect_generator(&fam, 2, 0, i).unwrap().scaled(0.16)
            + &collect_generator(&fam, 0, 2, i).unwrap().scaled(0.09);
        let direct = zeeman_eom_generator(&coeffs, i, Convention::Paper);
        worst = worst.max((&engine - &direct).max_norm());
        assert!(coherence_coupling_defect(&direct) < 1e-12);
        assert!(coherence_coupling_defect(&engine) < 1e-12);
        assert!(engine.max_norm() > 1e-3);
    }
    worst
}

#[test]
fn coefficient_generator_matches_engine() {
    for (beta, omega, seed) in [(1.0, 1.0, 3), (0.5, 1.6, 4), (4.0, 0.7, 5)] {
        let d = engine_vs_coefficients(beta, omega, seed);
        assert!(d < 1e-8, "beta {beta} omega {omega}: {d:e}");
    }
}

#[test]
fn decay_rates_add_and_depend_on_convention() {
    let grid = TimeGrid::new(0.05, 40).unwrap();
    let c = zeeman_coefficients(&bath(1.0, 1.3, 0.5, 4), &Kernel::Exponential { sigma: 0.5, gamma: 1.0 }, &grid).unwrap();
    let paper = coherence_decay_analysis(&c, Convention::Paper, false).unwrap();
    assert_eq!(paper.additivity_defect(), 0.0);
    assert!(matches!(coherence_decay_analysis(&c, Convention::Halved, false), Err(DynamicsError::Convention(_))));
    let halved = coherence_decay_analysis(&c, Convention::Halved, true).unwrap();
    assert_eq!(halved.additivity_defect(), 0.0);
    for i in 0..=40 {
        assert_eq!(paper.d_cavity[i], 4.0 * halved.d_cavity[i]);
        assert_eq!(paper.d_bfield[i], halved.d_bfield[i]);
        assert_eq!(paper.phase_rate[i], 4.0 * halved.phase_rate[i]);
    }
    // the halved generator's rho_01 rate agrees with the rescaled analysis
    let l = zeeman_eom_generator(&c, 30, Convention::Halved);
    let rate = l.matrix()[(2, 2)];
    assert!((rate.re + halved.d_total[30]).abs() < 1e-14);
    assert!((rate.im - halved.phase_rate[30]).abs() < 1e-14);
    let lp = zeeman_eom_generator(&c, 30, Convention::Paper);
    assert!((lp.matrix()[(2, 2)].re + paper.d_total[30]).abs() < 1e-14);
    assert!((lp.matrix()[(2, 2)].im - paper.phase_rate[30]).abs() < 1e-14);
}

#[test]
fn no_classical_noise_means_cavity_only_decay() {
    let grid = TimeGrid::new(0.05, 40).unwrap();
    let c = zeeman_coefficients(&bath(1.0, 1.3, 0.5, 4), &Kernel::Exponential { sigma: 0.0, gamma: 1.0 }, &grid).unwrap();
    let r = coherence_decay_analysis(&c, Convention::Paper, false).unwrap();
    assert_eq!(r.d_total, r.d_cavity);
    assert!(r.d_bfield.iter().all(|&x| x == 0.0));
    let _ = CMat::<f64>::zeros(1, 1);
}
