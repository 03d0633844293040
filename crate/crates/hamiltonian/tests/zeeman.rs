use noisefold_hamiltonian::{
    pauli_ops, stochastic_zeeman, zeeman_cavity_interaction, Convention, NoiseStrengths,
};
use noisefold_linalg::{cr, hermiticity_defect, max_abs, CMat, Complex, TimeGrid};
use noisefold_noise::{
    sample_ou_ensemble, GaussianProcessSpec, Mode, StochasticEnsemble, Temperature,
    ThermalBathSpec,
};

fn bath(g: f64, detuning: f64, n_max: usize) -> ThermalBathSpec<f64> {
    ThermalBathSpec::new(
        vec![Mode { omega: 1.0 + detuning, g }],
        Temperature::Finite { beta: 1.0 },
        n_max,
        1.0,
    )
    .unwrap()
}

#[test]
fn zero_coupling_gives_zero_interaction() {
    let hi = zeeman_cavity_interaction(&bath(0.0, 0.3, 3), Convention::Paper).unwrap();
    for t in [0.0, 0.5, 2.0] {
        assert_eq!(max_abs(&hi.h_se(t)), 0.0);
    }
}

#[test]
fn resonant_bath_operator_is_constant() {
    let b = bath(0.4, 0.0, 3);
    let hi = zeeman_cavity_interaction(&b, Convention::Paper).unwrap();
    let f = &hi.factors()[0];
    let want = noisefold_noise::annihilation(&b, 0).unwrap() * cr(0.4);
    for t in [0.0, 1.7, 9.0] {
        assert!(max_abs(&((f.e)(t) - &want)) < 1e-16);
    }
}

#[test]
fn matches_fock_basis_assembly() {
    let n_max = 4;
    let (g, w, t) = (0.1, 0.5, std::f64::consts::PI);
    let hi = zeeman_cavity_interaction(&bath(g, w, n_max), Convention::Paper).unwrap();
    let got = hi.h_se(t);
    let de = n_max + 1;
    let mut want = CMat::<f64>::zeros(2 * de, 2 * de);
    let phase = Complex::new(0.0, -w * t).exp();
    // sigma_+ b: |1, m> -> 2 sqrt(m) |0, m-1>
    for m in 1..de {
        let amp = phase * cr(2.0 * g * (m as f64).sqrt());
        want[(m - 1, de + m)] += amp;
        want[(de + m, m - 1)] += amp.conj();
    }
    assert!(max_abs(&(got - want)) < 1e-15);
}

#[test]
fn bath_factors_are_adjoint_pairs() {
    let hi = zeeman_cavity_interaction(&bath(0.3, 0.7, 5), Convention::Paper).unwrap();
    let (f1, f2) = (&hi.factors()[0], &hi.factors()[1]);
    for t in [0.0, 0.31, 4.2] {
        assert_eq!((f2.e)(t), (f1.e)(t).adjoint());
        assert!(hermiticity_defect(&hi.h_se(t)) <= 1e-13);
    }
}

#[test]
fn halved_convention_halves_coupling() {
    let b = bath(0.3, 0.2, 3);
    let p = zeeman_cavity_interaction(&b, Convention::Paper).unwrap().h_se(0.8);
    let h = zeeman_cavity_interaction(&b, Convention::Halved).unwrap().h_se(0.8);
    assert!(max_abs(&(p - h * cr(2.0))) < 1e-16);
}

#[test]
fn stochastic_zeeman_scaling() {
    let grid = TimeGrid::<f64>::new(0.1, 4).unwrap();
    let zero = StochasticEnsemble::deterministic(&grid, vec![0.0; 5]).unwrap();
    let h0 = stochastic_zeeman(zero).unwrap();
    assert_eq!(max_abs(&h0.h(0, 2)), 0.0);
    let two = StochasticEnsemble::deterministic(&grid, vec![2.0; 5]).unwrap();
    let h2 = stochastic_zeeman(two).unwrap();
    assert_eq!(h2.h(0, 3), pauli_ops::<f64>(Convention::Paper).sz);
}

#[test]
fn ensemble_mean_hamiltonian_is_small() {
    let grid = TimeGrid::<f64>::new(0.05, 40).unwrap();
    let sigma = 0.8;
    let r = 4000;
    let spec = GaussianProcessSpec::new(sigma, 1.0, 77).unwrap();
    let h = stochastic_zeeman(sample_ou_ensemble(&spec, &grid, r).unwrap()).unwrap();
    let bound = 5.0 * sigma / (2.0 * (r as f64).sqrt());
    for i in 0..grid.len() {
        assert!(max_abs(&h.mean(i)) < bound);
        for j in [0, 17, r - 1] {
            assert!(hermiticity_defect(&h.h(j, i)) <= 1e-13);
        }
    }
}

#[test]
fn strengths_validated() {
    assert!(NoiseStrengths::new(-0.1, 0.2).is_err());
    assert!(NoiseStrengths::new(0.1, f64::NAN).is_err());
    let s = NoiseStrengths::new(0.5, 0.25).unwrap();
    assert_eq!(s.weight(2, 1), 0.0625);
    assert_eq!(s.scaled(0.5).lambda(), 0.25);
}

#[test]
fn cavity_correlations_match_mode_sums() {
    use noisefold_noise::{
        bath_correlation, connected_bath_correlation, emission_occupation, mean_occupation,
        thermal_state,
    };
    let modes = vec![Mode { omega: 1.3, g: 0.2 }, Mode { omega: 0.8, g: 0.5 }];
    let b = ThermalBathSpec::new(modes, Temperature::Finite { beta: 0.9 }, 4, 1.0).unwrap();
    let rho = thermal_state(&b).unwrap();
    let rho = rho.matrix();
    let hi = zeeman_cavity_interaction(&b, Convention::Paper).unwrap();
    let e = |n: usize, t: f64| (hi.factors()[n].e)(t);
    for (t, tp) in [(0.4, 0.1), (2.0, 3.5), (1.0, 1.0)] {
        assert!(bath_correlation(&e(0, t), &e(0, tp), rho).norm() < 1e-15);
        assert!(bath_correlation(&e(1, t), &e(1, tp), rho).norm() < 1e-15);
        let mut c12 = Complex::new(0.0, 0.0);
        let mut c21 = Complex::new(0.0, 0.0);
        for k in 0..2 {
            let g2 = b.modes()[k].g.powi(2);
            let w = b.omega_k0(k);
            c12 += Complex::new(0.0, -w * (t - tp)).exp() * (g2 * emission_occupation(&b, k).unwrap());
            c21 += Complex::new(0.0, w * (t - tp)).exp() * (g2 * mean_occupation(&b, k).unwrap());
        }
        let got12 = bath_correlation(&e(0, t), &e(1, tp), rho);
        let got21 = bath_correlation(&e(1, t), &e(0, tp), rho);
        assert!((got12 - c12).norm() < 1e-12);
        assert!((got21 - c21).norm() < 1e-12);
        assert_eq!(connected_bath_correlation(&e(0, t), &e(1, tp), rho), got12);
        // C_mn(t, t') = conj(C_nm(t', t))
        assert!((got12 - bath_correlation(&e(0, tp), &e(1, t), rho).conj()).norm() < 1e-15);
    }
}
