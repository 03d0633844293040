use noisefold_hamiltonian::NoiseStrengths;
use noisefold_linalg::ComplexField;
use noisefold_linalg::{max_abs, min_eigenvalue, CMat, Complex, DensityMatrix, Real, Superoperator, TimeGrid};
use noisefold_perturbation::GeneratorTerm;

use crate::trajectory::{Diagnostics, TrajectoryMeta, POSITIVITY_TOLERANCE};
use crate::{DynamicsError, Result, Trajectory};

pub const SYMMETRIZATION_LIMIT: f64 = 1e-8;
pub const TRACE_LIMIT: f64 = 1e-10;
pub const BLOWUP_NORM: f64 = 10.0;

/// Sum of `lambda^m delta^n L_(m,n)(t_i)` at every node.
fn weighted_generators<T: Real>(
    generators: &[GeneratorTerm<T>],
    d: usize,
    grid: &TimeGrid<T>,
    s: &NoiseStrengths<T>,
) -> Result<Vec<Superoperator<T>>> {
    let mut total = vec![Superoperator::zero(d); grid.len()];
    for g in generators {
        if g.times.len() != grid.len() || g.times.iter().enumerate().any(|(k, &i)| k != i) {
            return Err(DynamicsError::GridMismatch(format!(
                "L{:?} holds {} times, grid has {} nodes",
                g.order,
                g.times.len(),
                grid.len()
            )));
        }
        let w = s.weight(g.order.0, g.order.1);
        for (acc, l) in total.iter_mut().zip(&g.values) {
            if l.dim() != d {
                return Err(DynamicsError::Dimension(format!("L{:?} acts on dim {}, state has {d}", g.order, l.dim())));
            }
            *acc += &l.scaled(w);
        }
    }
    Ok(total)
}

/// RK4 on `d rho / dt = sum lambda^m delta^n L_(m,n)(t) rho`, generators
/// linearly interpolated to half steps.
pub fn integrate_master_equation<T: Real>(
    generators: &[GeneratorTerm<T>],
    rho0: &DensityMatrix<T>,
    grid: &TimeGrid<T>,
    strengths: &NoiseStrengths<T>,
) -> Result<Trajectory<T>> {
    let d = rho0.dim();
    let ls = weighted_generators(generators, d, grid, strengths)?;
    let h = grid.dt();
    let half = T::lit(0.5);
    let cs = |x: T| Complex::new(x, T::zero());
    let mut rho = rho0.matrix().clone();
    let mut states = Vec::with_capacity(grid.len());
    let mut diag = Diagnostics { min_eigenvalue: min_eigenvalue(&rho).to_f64_lossy(), ..Default::default() };
    states.push(rho.clone());
    for i in 0..grid.n_steps() {
        let (l0, l1) = (&ls[i], &ls[i + 1]);
        let lm = (l0 + l1).scaled(half);
        let k1 = l0.apply(&rho);
        let k2 = lm.apply(&(&rho + &k1 * cs(h * half)));
        let k3 = lm.apply(&(&rho + &k2 * cs(h * half)));
        let k4 = l1.apply(&(&rho + &k3 * cs(h)));
        let incr = (k1 + (k2 + k3) * cs(T::lit(2.0)) + k4)
            * cs(h / T::lit(6.0));
        let next = &rho + incr;
        let step = i + 1;
        if next.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(DynamicsError::NonFinite(step));
        }
        let sym = (&next + next.adjoint()).scale(half);
        let correction = max_abs(&(&next - &sym)).to_f64_lossy();
        if correction > SYMMETRIZATION_LIMIT {
            return Err(DynamicsError::Symmetrization { step, correction });
        }
        let norm = max_abs(&sym).to_f64_lossy();
        if norm > BLOWUP_NORM {
            return Err(DynamicsError::Instability { step, norm });
        }
        let deviation = (sym.trace() - cs(T::one())).modulus().to_f64_lossy();
        if deviation > TRACE_LIMIT {
            return Err(DynamicsError::TraceDrift { step, deviation });
        }
        let me = min_eigenvalue(&sym).to_f64_lossy();
        if me < -POSITIVITY_TOLERANCE {
            diag.positivity_violations.push(step);
        }
        diag.min_eigenvalue = diag.min_eigenvalue.min(me);
        diag.max_symmetrization = diag.max_symmetrization.max(correction);
        diag.max_trace_deviation = diag.max_trace_deviation.max(deviation);
        rho = sym;
        states.push(rho.clone());
    }
    let meta = TrajectoryMeta {
        order: generators.iter().map(|g| g.order.0 + g.order.1).max().unwrap_or(0),
        lambda: strengths.lambda().to_f64_lossy(),
        delta: strengths.delta().to_f64_lossy(),
        seeds: Vec::new(),
        realizations: 1,
    };
    Ok(Trajectory::new(*grid, states, None, meta, diag))
}

/// `L_(0,1)(t) = -i mean(t) [base, .]` on every node, for a known mean.
pub fn mean_field_generator<T: Real>(base: &CMat<T>, mean: &[T]) -> GeneratorTerm<T> {
    let comm = Superoperator::commutator(base);
    GeneratorTerm {
        order: (0, 1),
        times: (0..mean.len()).collect(),
        values: mean.iter().map(|&a| comm.scaled(a)).collect(),
    }
}
