use noisefold_hamiltonian::{pauli_ops, Convention, NoiseStrengths, PauliOps};
use noisefold_linalg::ComplexField;
use noisefold_linalg::{CMat, Complex, Real, Superoperator, TimeGrid};
use noisefold_noise::{emission_occupation, mean_occupation, Kernel, ThermalBathSpec};
use noisefold_perturbation::GeneratorTerm;

use crate::{DynamicsError, Result};

/// Time series of the two-level decay coefficients on a grid.
///
/// `d_r`/`d_i` come from absorption (`N_k`), `dp_r`/`dp_i` from emission
/// (`Tr(b b^dagger rho_E)` on the truncated state) and `d_c` is a quarter
/// of the integrated classical kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayCoefficients<T: Real> {
    pub grid: TimeGrid<T>,
    pub d_r: Vec<T>,
    pub d_i: Vec<T>,
    pub dp_r: Vec<T>,
    pub dp_i: Vec<T>,
    pub d_c: Vec<T>,
}

impl<T: Real> DecayCoefficients<T> {
    pub fn len(&self) -> usize {
        self.d_r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d_r.is_empty()
    }

    /// Cavity terms times `lambda^2`, `d_c` times `delta^2`.
    pub fn with_strengths(&self, s: &NoiseStrengths<T>) -> Self {
        let l2 = s.lambda() * s.lambda();
        let d2 = s.delta() * s.delta();
        let sc = |v: &[T], f: T| v.iter().map(|&x| x * f).collect::<Vec<T>>();
        Self {
            grid: self.grid,
            d_r: sc(&self.d_r, l2),
            d_i: sc(&self.d_i, l2),
            dp_r: sc(&self.dp_r, l2),
            dp_i: sc(&self.dp_i, l2),
            d_c: sc(&self.d_c, d2),
        }
    }

    /// Smallest `d_c` on the grid; negative values flag a kernel outside its
    /// positivity regime.
    pub fn min_d_c(&self) -> T {
        self.d_c.iter().fold(T::zero(), |m, &x| m.min(x))
    }
}

/// Trapezoid integrals over `[0, t_i]` of the mode sums and the kernel.
pub fn zeeman_coefficients<T: Real>(
    bath: &ThermalBathSpec<T>,
    kernel: &Kernel<T>,
    grid: &TimeGrid<T>,
) -> Result<DecayCoefficients<T>> {
    if let Kernel::Empirical(m) = kernel {
        if m.nrows() != grid.len() || m.ncols() != grid.len() {
            return Err(DynamicsError::GridMismatch(format!(
                "empirical kernel is {}x{}, grid has {} nodes",
                m.nrows(),
                m.ncols(),
                grid.len()
            )));
        }
    }
    let modes = bath.modes().len();
    let mut occ = Vec::with_capacity(modes);
    for k in 0..modes {
        let g2 = bath.modes()[k].g * bath.modes()[k].g;
        occ.push((bath.omega_k0(k), g2 * mean_occupation(bath, k)?, g2 * emission_occupation(bath, k)?));
    }
    let n = grid.len();
    let mut c = DecayCoefficients {
        grid: *grid,
        d_r: vec![T::zero(); n],
        d_i: vec![T::zero(); n],
        dp_r: vec![T::zero(); n],
        dp_i: vec![T::zero(); n],
        d_c: vec![T::zero(); n],
    };
    let quarter = T::lit(0.25);
    for i in 1..n {
        let w = grid.trapezoid_weights(i);
        let ti = grid.t(i);
        for (l, &wl) in w.iter().enumerate() {
            let tau = ti - grid.t(l);
            for &(om, gn, ge) in &occ {
                let (s, co) = (om * tau).sin_cos();
                c.d_r[i] += wl * gn * co;
                c.d_i[i] += wl * gn * s;
                c.dp_r[i] += wl * ge * co;
                c.dp_i[i] += wl * ge * s;
            }
            c.d_c[i] += wl * kernel.at(grid, i, l);
        }
        c.d_c[i] *= quarter;
    }
    Ok(c)
}

fn dissipator<T: Real>(a: &CMat<T>, b: &CMat<T>) -> Superoperator<T> {
    // rho -> a b rho + rho a b - 2 b rho a
    let ab = a * b;
    let id = CMat::identity(ab.nrows(), ab.nrows());
    let two = Complex::new(T::lit(2.0), T::zero());
    &(&Superoperator::sandwich(&ab, &id) + &Superoperator::sandwich(&id, &ab)) - &Superoperator::sandwich(&(b * two), a)
}

fn cavity_part<T: Real>(c: &DecayCoefficients<T>, i: usize, p: &PauliOps<T>) -> Superoperator<T> {
    let re = |x: T| Complex::new(x, T::zero());
    let h_eff = &p.sm * &p.sp * re(c.d_i[i]) - &p.sp * &p.sm * re(c.dp_i[i]);
    let mut l = Superoperator::commutator(&h_eff);
    l = &l - &dissipator(&p.sm, &p.sp).scaled(c.d_r[i]);
    &l - &dissipator(&p.sp, &p.sm).scaled(c.dp_r[i])
}

fn dephasing_part<T: Real>(c: &DecayCoefficients<T>, i: usize, p: &PauliOps<T>) -> Superoperator<T> {
    let id = CMat::identity(2, 2);
    let l = &Superoperator::sandwich(&id, &id) - &Superoperator::sandwich(&p.sz, &p.sz);
    l.scaled(T::lit(-2.0) * c.d_c[i])
}

/// Full right-hand side at node `i` with the coefficients as given
/// (strength factors already applied, see [`DecayCoefficients::with_strengths`]).
pub fn zeeman_eom_generator<T: Real>(c: &DecayCoefficients<T>, i: usize, convention: Convention) -> Superoperator<T> {
    let p = pauli_ops::<T>(convention);
    &cavity_part(c, i, &p) + &dephasing_part(c, i, &p)
}

/// Unscaled `L_(2,0)` and `L_(0,2)` series built from the coefficients, for
/// use with strength weighting in the integrator.
pub fn zeeman_generator_terms<T: Real>(c: &DecayCoefficients<T>, convention: Convention) -> [GeneratorTerm<T>; 2] {
    let p = pauli_ops::<T>(convention);
    let times: Vec<usize> = (0..c.len()).collect();
    [
        GeneratorTerm { order: (2, 0), times: times.clone(), values: times.iter().map(|&i| cavity_part(c, i, &p)).collect() },
        GeneratorTerm { order: (0, 2), times: times.clone(), values: times.iter().map(|&i| dephasing_part(c, i, &p)).collect() },
    ]
}

/// Largest superoperator entry feeding `rho_01` from the other three
/// matrix elements.
pub fn coherence_coupling_defect<T: Real>(l: &Superoperator<T>) -> T {
    // column-stacked index of rho_ab is a + 2b
    let row = 2;
    [0usize, 1, 3].iter().fold(T::zero(), |m, &col| {
        let z = l.matrix()[(row, col)];
        m.max((z.re * z.re + z.im * z.im).sqrt())
    })
}

/// Decay and phase rates of `rho_01`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceRates<T: Real> {
    pub grid: TimeGrid<T>,
    pub convention: Convention,
    pub d_total: Vec<T>,
    pub d_cavity: Vec<T>,
    pub d_bfield: Vec<T>,
    /// `d arg(rho_01) / dt`.
    pub phase_rate: Vec<T>,
}

impl<T: Real> CoherenceRates<T> {
    /// `max_t |D_total - (D_cavity + D_Bfield)|`.
    pub fn additivity_defect(&self) -> T {
        (0..self.d_total.len()).fold(T::zero(), |m, i| {
            m.max((self.d_total[i] - (self.d_cavity[i] + self.d_bfield[i])).abs())
        })
    }

    /// `rho_01(0) exp(int_0^t (i phase_rate - D_total))` by cumulative trapezoid.
    pub fn predicted_rho01(&self, rho01_0: Complex<T>) -> Vec<Complex<T>> {
        let decay = self.grid.cumulative_trapezoid(&self.d_total);
        let phase = self.grid.cumulative_trapezoid(&self.phase_rate);
        decay
            .iter()
            .zip(&phase)
            .map(|(&a, &p)| rho01_0 * Complex::new(-a, p).exp())
            .collect()
    }

    /// RK4 on the scalar equation `d rho_01/dt = (i phase_rate - D_total) rho_01`
    /// with rates linearly interpolated between nodes.
    pub fn integrate_rho01(&self, rho01_0: Complex<T>) -> Vec<Complex<T>> {
        let h = self.grid.dt();
        let half = T::lit(0.5);
        let rate = |i: usize| Complex::new(-self.d_total[i], self.phase_rate[i]);
        let mut z = rho01_0;
        let mut out = vec![z];
        for i in 0..self.grid.n_steps() {
            let (r0, r1) = (rate(i), rate(i + 1));
            let rm = (r0 + r1) * half;
            let k1 = r0 * z;
            let k2 = rm * (z + k1 * (h * half));
            let k3 = rm * (z + k2 * (h * half));
            let k4 = r1 * (z + k3 * h);
            z += (k1 + (k2 + k3) * T::lit(2.0) + k4) * (h / T::lit(6.0));
            out.push(z);
        }
        out
    }
}

/// Splits the `rho_01` decay rate into cavity and classical-field parts.
///
/// The cavity prefactor depends on the ladder normalization: 4 for the
/// doubled operators, 1 for the standard halved ones. The halved convention
/// is refused unless `rescale` acknowledges that factor; the dephasing
/// prefactor (from `sigma_z`) is 4 in both.
pub fn coherence_decay_analysis<T: Real>(
    c: &DecayCoefficients<T>,
    convention: Convention,
    rescale: bool,
) -> Result<CoherenceRates<T>> {
    if convention == Convention::Halved && !rescale {
        return Err(DynamicsError::Convention(
            "halved ladder operators change the cavity decay prefactor from 4 to 1; pass the rescale flag".into(),
        ));
    }
    let s = T::lit(convention.ladder_scale());
    let fc = s * s;
    let four = T::lit(4.0);
    let n = c.len();
    let mut r = CoherenceRates {
        grid: c.grid,
        convention,
        d_total: Vec::with_capacity(n),
        d_cavity: Vec::with_capacity(n),
        d_bfield: Vec::with_capacity(n),
        phase_rate: Vec::with_capacity(n),
    };
    for i in 0..n {
        let cav = c.d_r[i] + c.dp_r[i];
        r.d_cavity.push(fc * cav);
        r.d_bfield.push(four * c.d_c[i]);
        r.d_total.push(if fc == four { four * (cav + c.d_c[i]) } else { fc * cav + four * c.d_c[i] });
        r.phase_rate.push(fc * (c.d_i[i] + c.dp_i[i]));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use noisefold_linalg::{c, cr};

    fn coeffs(n: usize) -> DecayCoefficients<f64> {
        let grid = TimeGrid::new(0.05, n).unwrap();
        let f = |a: f64, b: f64| (0..=n).map(|i| a * (1.0 - (-b * grid.t(i)).exp())).collect::<Vec<_>>();
        DecayCoefficients {
            grid,
            d_r: f(0.03, 1.1),
            d_i: f(-0.02, 0.7),
            dp_r: f(0.05, 1.1),
            dp_i: f(0.01, 0.4),
            d_c: f(0.02, 2.0),
        }
    }

    #[test]
    fn halved_convention_requires_rescale() {
        let c = coeffs(10);
        assert!(matches!(coherence_decay_analysis(&c, Convention::Halved, false), Err(DynamicsError::Convention(_))));
        let half = coherence_decay_analysis(&c, Convention::Halved, true).unwrap();
        let paper = coherence_decay_analysis(&c, Convention::Paper, false).unwrap();
        for i in 0..c.len() {
            assert_eq!(half.d_cavity[i], c.d_r[i] + c.dp_r[i]);
            assert!((paper.d_cavity[i] - 4.0 * half.d_cavity[i]).abs() < 1e-15);
            assert_eq!(paper.d_bfield[i], half.d_bfield[i]);
        }
        assert_eq!(paper.additivity_defect(), 0.0);
    }

    #[test]
    fn dephasing_only_touches_coherences() {
        let mut k = coeffs(10);
        for v in [&mut k.d_r, &mut k.d_i, &mut k.dp_r, &mut k.dp_i] {
            v.iter_mut().for_each(|x| *x = 0.0);
        }
        let l = zeeman_eom_generator(&k, 10, Convention::Paper);
        let rho = CMat::from_row_slice(2, 2, &[cr(0.3), c(0.1, 0.2), c(0.1, -0.2), cr(0.7)]);
        let d = l.apply(&rho);
        assert!(d[(0, 0)].norm() < 1e-16 && d[(1, 1)].norm() < 1e-16);
        assert!((d[(0, 1)] + rho[(0, 1)] * 4.0 * k.d_c[10]).norm() < 1e-15);
    }

    #[test]
    fn coherence_decouples_from_populations() {
        let c = coeffs(20);
        for conv in [Convention::Paper, Convention::Halved] {
            for i in 0..c.len() {
                let l = zeeman_eom_generator(&c, i, conv);
                assert!(coherence_coupling_defect(&l) < 1e-15);
                assert!(l.trace_column_defect() < 1e-15);
            }
        }
    }

    #[test]
    fn closed_form_and_rk4_coherence_agree() {
        let r = coherence_decay_analysis(&coeffs(200), Convention::Paper, false).unwrap();
        let z0 = c(0.5, 0.0);
        let err = r
            .predicted_rho01(z0)
            .iter()
            .zip(r.integrate_rho01(z0))
            .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
        // both are second-order accurate in the rates
        assert!(err < 1e-5, "{err}");
    }
}
