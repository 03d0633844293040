use nalgebra::ComplexField;
use noisefold_linalg::{
    c, cr, expm, kron, matrix_exp, partial_trace_env, ptrace_env, tensor_product, CMat, Complex,
    Operator, SpaceTag, Superoperator,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMat<f64> {
    CMat::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMat<f64> {
    let a = random_matrix(rng, n);
    (&a + a.adjoint()) * cr(0.5)
}

fn random_density(rng: &mut ChaCha8Rng, n: usize) -> CMat<f64> {
    let a = random_matrix(rng, n);
    let p = &a * a.adjoint();
    let tr = p.trace();
    p / tr
}

fn max_abs(m: &CMat<f64>) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.modulus()))
}

#[test]
fn partial_trace_matches_index_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let j = random_hermitian(&mut rng, 6);
    let got = partial_trace_env(&Operator::new(SpaceTag::Joint, j.clone()).unwrap(), 2, 3).unwrap();
    let mut want = CMat::<f64>::zeros(2, 2);
    for a in 0..2 {
        for b in 0..2 {
            for m in 0..3 {
                want[(a, b)] += j[(3 * a + m, 3 * b + m)];
            }
        }
    }
    assert!(max_abs(&(got.matrix() - want)) < 1e-15);
}

#[test]
fn partial_trace_preserves_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let j = random_matrix(&mut rng, 12);
        let r = ptrace_env(&j, 3, 4);
        let (a, b) = (r.trace(), j.trace());
        assert!((a - b).modulus() <= 1e-13 * b.modulus().max(1.0));
    }
}

#[test]
fn sandwich_kernel_matches_matrix_unit_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let d = 3;
    let a = random_matrix(&mut rng, d);
    let b = random_matrix(&mut rng, d);
    let s = Superoperator::from_action(d, |r| &a * r * &b);
    // entry (i + d j, k + d l) of the kernel is a_ik b_lj
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let want = a[(i, k)] * b[(l, j)];
                    assert!((s.matrix()[(i + d * j, k + d * l)] - want).modulus() < 1e-15);
                }
            }
        }
    }
    assert!((&s - &Superoperator::sandwich(&a, &b)).max_norm() < 1e-15);
}

#[test]
fn superop_application_reproduces_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let h = random_hermitian(&mut rng, 2);
    let l = random_matrix(&mut rng, 2);
    let action = |r: &CMat<f64>| {
        let comm = (&h * r - r * &h) * c(0.0, -1.0);
        comm + &l * r * l.adjoint()
    };
    let s = Superoperator::from_action(2, action);
    for _ in 0..100 {
        let rho = random_density(&mut rng, 2);
        let diff = s.apply(&rho) - action(&rho);
        assert!(max_abs(&diff) < 1e-14);
    }
}

#[test]
fn hermitian_exp_matches_taylor_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let h = random_hermitian(&mut rng, 4);
    let scale = c(0.0, -1e-3);
    let got = expm(&h, scale).unwrap();
    let x = &h * scale;
    let mut term = CMat::<f64>::identity(4, 4);
    let mut sum = term.clone();
    for k in 1..20 {
        term = &term * &x / cr(k as f64);
        sum += &term;
    }
    assert!(max_abs(&(got - sum)) < 1e-12);
}

#[test]
fn tensor_then_trace_is_identity_on_system() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let s = random_matrix(&mut rng, 2);
    let e = random_density(&mut rng, 5);
    let j = tensor_product(
        &Operator::new(SpaceTag::System, s.clone()).unwrap(),
        &Operator::new(SpaceTag::Environment, e).unwrap(),
    )
    .unwrap();
    let back = partial_trace_env(&j, 2, 5).unwrap();
    assert!(max_abs(&(back.matrix() - s)) < 1e-14);
}

#[test]
fn single_precision_path_works() {
    let h = CMat::<f32>::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]);
    let op = Operator::new(SpaceTag::System, h).unwrap();
    let u = matrix_exp(&op, Complex::new(0.0f32, -0.3)).unwrap();
    let uu = u.matrix() * u.matrix().adjoint() - CMat::<f32>::identity(2, 2);
    assert!(uu.iter().all(|z| z.norm() < 1e-6));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitary_exponential(seed in any::<u64>(), n in 1usize..7, dt in 1e-4f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(&mut rng, n);
        let u = expm(&h, c(0.0, -dt)).unwrap();
        let defect = &u * u.adjoint() - CMat::<f64>::identity(n, n);
        prop_assert!(max_abs(&defect) < 1e-12);
    }

    #[test]
    fn trace_of_product_state(seed in any::<u64>(), de in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rs = random_density(&mut rng, 2);
        let re = random_density(&mut rng, de);
        let back = ptrace_env(&kron(&rs, &re), 2, de);
        prop_assert!(max_abs(&(back - rs)) < 1e-14);
    }
}
