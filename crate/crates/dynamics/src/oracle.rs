use noisefold_hamiltonian::{FactorizedInteraction, NoiseStrengths, StochasticSystemHamiltonian};
use noisefold_linalg::ComplexField;
use noisefold_linalg::{
    connected_blocks, hermitian_expm, kron, ptrace_env, CMat, Complex, DensityMatrix, LinalgError, Real, TimeGrid,
    DEFAULT_JOINT_CAP,
};
use rayon::prelude::*;

use crate::trajectory::{Diagnostics, TrajectoryMeta};
use crate::{DynamicsError, Result, Trajectory};

pub const UNITARITY_LIMIT: f64 = 1e-12;
pub const JOINT_TRACE_LIMIT: f64 = 1e-12;
const REDUCTION_CHUNK: usize = 16;

/// Running sums of reduced states and of squared real/imaginary parts.
struct Moments<T: Real> {
    sum: Vec<CMat<T>>,
    sq: Vec<CMat<T>>,
}

impl<T: Real> Moments<T> {
    fn zeros(n: usize, d: usize) -> Self {
        Self { sum: vec![CMat::zeros(d, d); n], sq: vec![CMat::zeros(d, d); n] }
    }

    fn push(&mut self, i: usize, rho: &CMat<T>) {
        self.sum[i] += rho;
        for (s, z) in self.sq[i].iter_mut().zip(rho.iter()) {
            *s += Complex::new(z.re * z.re, z.im * z.im);
        }
    }

    fn merge(&mut self, other: &Self) {
        for (a, b) in self.sum.iter_mut().zip(&other.sum) {
            *a += b;
        }
        for (a, b) in self.sq.iter_mut().zip(&other.sq) {
            *a += b;
        }
    }
}

/// Block-diagonal `exp(-i dt H)` over the fixed sparsity blocks.
fn block_propagator<T: Real>(h: &CMat<T>, blocks: &[Vec<usize>], dt: T, step: usize) -> Result<CMat<T>> {
    let n = h.nrows();
    let mut w = CMat::zeros(n, n);
    let scale = Complex::new(T::zero(), -dt);
    for b in blocks {
        let sub = CMat::from_fn(b.len(), b.len(), |r, c| h[(b[r], b[c])]);
        let e = hermitian_expm(&sub, scale);
        let defect = (e.adjoint() * &e - CMat::identity(b.len(), b.len()))
            .iter()
            .fold(T::zero(), |m, z| m.max(z.modulus()))
            .to_f64_lossy();
        if defect > UNITARITY_LIMIT {
            return Err(DynamicsError::Unitarity { step, defect });
        }
        for (r, &br) in b.iter().enumerate() {
            for (c, &bc) in b.iter().enumerate() {
                w[(br, bc)] = e[(r, c)];
            }
        }
    }
    Ok(w)
}

/// Brute-force reference: each realization's joint state is stepped with
/// `exp(-i dt H(t + dt/2))`, where the classical coefficient is linearly
/// interpolated to the midpoint, then partial-traced and averaged in a
/// fixed order. The realization count is the ensemble's.
pub fn exact_oracle<T: Real>(
    interaction: &FactorizedInteraction<T>,
    noise: Option<&StochasticSystemHamiltonian<T>>,
    rho_s0: &DensityMatrix<T>,
    rho_e0: &DensityMatrix<T>,
    grid: &TimeGrid<T>,
    strengths: &NoiseStrengths<T>,
) -> Result<Trajectory<T>> {
    let (d, de) = (interaction.sys_dim(), interaction.env_dim());
    if rho_s0.dim() != d || rho_e0.dim() != de {
        return Err(DynamicsError::Dimension(format!(
            "states are {}x{}, interaction is {d}x{de}",
            rho_s0.dim(),
            rho_e0.dim()
        )));
    }
    let joint = d * de;
    if joint > DEFAULT_JOINT_CAP {
        return Err(LinalgError::Capacity { dim: joint, cap: DEFAULT_JOINT_CAP }.into());
    }
    if let Some(nz) = noise {
        if nz.sys_dim() != d {
            return Err(DynamicsError::Dimension(format!("noise acts on dim {}, system is {d}", nz.sys_dim())));
        }
        if nz.ensemble().grid() != grid {
            return Err(DynamicsError::GridMismatch("noise ensemble sampled on a different grid".into()));
        }
    }
    let dt = grid.dt();
    let half = T::lit(0.5);
    let lam = Complex::new(strengths.lambda(), T::zero());
    let h_mid: Vec<CMat<T>> = (0..grid.n_steps())
        .map(|i| interaction.h_se(grid.t(i) + dt * half) * lam)
        .collect();
    let lifted = noise.map(|nz| nz.lifted_base(de));
    let mut pattern = CMat::<T>::zeros(joint, joint);
    for h in h_mid.iter().chain(lifted.as_ref()) {
        for (p, z) in pattern.iter_mut().zip(h.iter()) {
            *p += Complex::new(z.modulus(), T::zero());
        }
    }
    let blocks = connected_blocks(&pattern);
    let x0 = kron(rho_s0.matrix(), rho_e0.matrix());
    let r = noise.map_or(1, |nz| nz.r());
    let n = grid.len();

    let run = |j: usize, acc: &mut Moments<T>| -> Result<()> {
        let mut x = x0.clone();
        acc.push(0, &ptrace_env(&x, d, de));
        for i in 0..grid.n_steps() {
            let mut h = h_mid[i].clone();
            if let (Some(nz), Some(b)) = (noise, &lifted) {
                let e = nz.ensemble();
                let a_mid = (e.value(j, i) + e.value(j, i + 1)) * half;
                h += b * Complex::new(strengths.delta() * a_mid, T::zero());
            }
            let w = block_propagator(&h, &blocks, dt, i + 1)?;
            x = &w * x * w.adjoint();
            if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(DynamicsError::NonFinite(i + 1));
            }
            acc.push(i + 1, &ptrace_env(&x, d, de));
        }
        let dev = (x.trace() - Complex::new(T::one(), T::zero())).modulus().to_f64_lossy();
        if dev > JOINT_TRACE_LIMIT {
            return Err(DynamicsError::TraceDrift { step: grid.n_steps(), deviation: dev });
        }
        Ok(())
    };

    let idx: Vec<usize> = (0..r).collect();
    let mut parts: Vec<Moments<T>> = idx
        .par_chunks(REDUCTION_CHUNK)
        .map(|chunk| {
            let mut acc = Moments::zeros(n, d);
            for &j in chunk {
                run(j, &mut acc)?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                a.merge(&b);
            }
            next.push(a);
        }
        parts = next;
    }
    let total = parts.pop().expect("at least one realization");
    let rf = T::from_usize(r).unwrap();
    let states: Vec<CMat<T>> = total.sum.iter().map(|s| s.map(|z| z / rf)).collect();
    let errors = (r > 1).then(|| {
        let bessel = T::from_usize(r - 1).unwrap();
        states
            .iter()
            .zip(&total.sq)
            .map(|(m, sq)| {
                CMat::from_fn(d, d, |a, b| {
                    let (mu, q) = (m[(a, b)], sq[(a, b)]);
                    let var_re = (q.re / rf - mu.re * mu.re).max(T::zero()) * rf / bessel;
                    let var_im = (q.im / rf - mu.im * mu.im).max(T::zero()) * rf / bessel;
                    Complex::new((var_re / rf).sqrt(), (var_im / rf).sqrt())
                })
            })
            .collect()
    });
    let mut diag = Diagnostics::default();
    for (i, s) in states.iter().enumerate() {
        let dev = (s.trace() - Complex::new(T::one(), T::zero())).modulus().to_f64_lossy();
        diag.max_trace_deviation = diag.max_trace_deviation.max(dev);
        let me = noisefold_linalg::min_eigenvalue(s).to_f64_lossy();
        if me < -crate::trajectory::POSITIVITY_TOLERANCE {
            diag.positivity_violations.push(i);
        }
        diag.min_eigenvalue = if i == 0 { me } else { diag.min_eigenvalue.min(me) };
    }
    let meta = TrajectoryMeta {
        order: 0,
        lambda: strengths.lambda().to_f64_lossy(),
        delta: strengths.delta().to_f64_lossy(),
        seeds: Vec::new(),
        realizations: r,
    };
    Ok(Trajectory::new(*grid, states, errors, meta, diag))
}
