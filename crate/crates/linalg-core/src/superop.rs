use nalgebra::ComplexField;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::DVector;

use crate::operator::{all_finite, max_norm};
use crate::{CMat, Complex, LinalgError, Real, Result};

/// Linear map on `d x d` operators, stored as a `d^2 x d^2` matrix acting on
/// column-stacked vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator<T: Real> {
    d: usize,
    m: CMat<T>,
}

/// Environment state prepared for repeated partial-trace contractions.
#[derive(Debug, Clone)]
pub struct EnvState<T: Real> {
    rho: CMat<T>,
    diag: Option<Vec<Complex<T>>>,
}

impl<T: Real> EnvState<T> {
    pub fn new(rho: CMat<T>) -> Self {
        let n = rho.nrows();
        let zero = Complex::new(T::zero(), T::zero());
        let is_diag = (0..n).all(|i| (0..n).all(|j| i == j || rho[(i, j)] == zero));
        let diag = is_diag.then(|| (0..n).map(|i| rho[(i, i)]).collect());
        Self { rho, diag }
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.rho
    }

    /// `P (I_d (x) rho_E)`.
    fn right_multiply(&self, p: &CMat<T>, d: usize) -> CMat<T> {
        let de = self.dim();
        match &self.diag {
            Some(diag) => {
                let mut w = p.clone();
                for col in 0..d * de {
                    let s = diag[col % de];
                    w.column_mut(col).scale_mut_complex(s);
                }
                w
            }
            None => p * crate::kron(&CMat::identity(d, d), &self.rho),
        }
    }
}

trait ScaleComplex<T: Real> {
    fn scale_mut_complex(&mut self, s: Complex<T>);
}

impl<T: Real, S> ScaleComplex<T> for nalgebra::Matrix<Complex<T>, nalgebra::Dyn, nalgebra::U1, S>
where
    S: nalgebra::StorageMut<Complex<T>, nalgebra::Dyn, nalgebra::U1>,
{
    fn scale_mut_complex(&mut self, s: Complex<T>) {
        for z in self.iter_mut() {
            *z *= s;
        }
    }
}

pub fn vec_op<T: Real>(m: &CMat<T>) -> DVector<Complex<T>> {
    DVector::from_column_slice(m.as_slice())
}

pub fn unvec_op<T: Real>(v: &DVector<Complex<T>>, d: usize) -> CMat<T> {
    CMat::from_column_slice(d, d, v.as_slice())
}

impl<T: Real> Superoperator<T> {
    pub fn from_matrix(d: usize, m: CMat<T>) -> Result<Self> {
        if m.nrows() != d * d || m.ncols() != d * d {
            return Err(LinalgError::Dimension(format!(
                "superoperator on d={d} needs {0}x{0}, got {1}x{2}",
                d * d,
                m.nrows(),
                m.ncols()
            )));
        }
        if !all_finite(&m) {
            return Err(LinalgError::NonFinite("superoperator"));
        }
        Ok(Self { d, m })
    }

    pub fn identity(d: usize) -> Self {
        Self { d, m: CMat::identity(d * d, d * d) }
    }

    pub fn zero(d: usize) -> Self {
        Self { d, m: CMat::zeros(d * d, d * d) }
    }

    /// Column `k` is `vec(action(E_k))` for the matrix unit at vec index `k`.
    pub fn from_action<F>(d: usize, action: F) -> Self
    where
        F: Fn(&CMat<T>) -> CMat<T>,
    {
        let mut m = CMat::zeros(d * d, d * d);
        for k in 0..d * d {
            let mut unit = CMat::zeros(d, d);
            unit[(k % d, k / d)] = Complex::new(T::one(), T::zero());
            let out = action(&unit);
            m.column_mut(k).copy_from_slice(out.as_slice());
        }
        Self { d, m }
    }

    /// Kernel of `rho -> A rho B`, i.e. `B^T (x) A`.
    pub fn sandwich(a: &CMat<T>, b: &CMat<T>) -> Self {
        Self { d: a.nrows(), m: b.transpose().kronecker(a) }
    }

    /// `rho -> -i [h, rho]`.
    pub fn commutator(h: &CMat<T>) -> Self {
        let d = h.nrows();
        let id = CMat::identity(d, d);
        let mi = Complex::new(T::zero(), -T::one());
        let m = (Self::sandwich(h, &id).m - Self::sandwich(&id, h).m) * mi;
        Self { d, m }
    }

    /// `rho -> Tr_E(P (rho (x) rho_E) Q^dagger)`.
    pub fn trace_sandwich(p: &CMat<T>, q: &CMat<T>, env: &EnvState<T>) -> Self {
        let d = p.nrows() / env.dim();
        let mut s = Self::zero(d);
        s.add_trace_sandwich(p, q, env);
        s
    }

    /// Accumulate `rho -> Tr_E(P (rho (x) rho_E) Q^dagger)` into `self`.
    pub fn add_trace_sandwich(&mut self, p: &CMat<T>, q: &CMat<T>, env: &EnvState<T>) {
        let d = self.d;
        let de = env.dim();
        let n = d * de;
        debug_assert_eq!(p.nrows(), n);
        let w = env.right_multiply(p, d);
        let ws = w.as_slice();
        let qs = q.as_slice();
        let dd = d * d;
        let out = self.m.as_mut_slice();
        for e in 0..d {
            for c in 0..d {
                let col = c + d * e;
                for b in 0..d {
                    for a in 0..d {
                        let row = a + d * b;
                        let mut acc = Complex::new(T::zero(), T::zero());
                        for pp in 0..de {
                            let wc = (c * de + pp) * n + a * de;
                            let qc = (e * de + pp) * n + b * de;
                            for m in 0..de {
                                acc += ws[wc + m] * qs[qc + m].conj();
                            }
                        }
                        out[row + dd * col] += acc;
                    }
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.m
    }

    pub fn apply(&self, rho: &CMat<T>) -> CMat<T> {
        unvec_op(&(&self.m * vec_op(rho)), self.d)
    }

    /// `self o inner`.
    pub fn compose(&self, inner: &Self) -> Self {
        Self { d: self.d, m: &self.m * &inner.m }
    }

    pub fn scaled(&self, s: T) -> Self {
        Self { d: self.d, m: self.m.scale(s) }
    }

    pub fn max_norm(&self) -> T {
        max_norm(&self.m)
    }

    /// Largest `|sum_a L[(a,a), k]|` over columns; zero for trace-annihilating maps.
    pub fn trace_column_defect(&self) -> T {
        let d = self.d;
        (0..d * d).fold(T::zero(), |acc, k| {
            let s = (0..d).fold(Complex::new(T::zero(), T::zero()), |s, a| {
                s + self.m[(a + d * a, k)]
            });
            acc.max(s.modulus())
        })
    }
}

impl<T: Real> Add for &Superoperator<T> {
    type Output = Superoperator<T>;
    fn add(self, rhs: Self) -> Superoperator<T> {
        Superoperator { d: self.d, m: &self.m + &rhs.m }
    }
}

impl<T: Real> Sub for &Superoperator<T> {
    type Output = Superoperator<T>;
    fn sub(self, rhs: Self) -> Superoperator<T> {
        Superoperator { d: self.d, m: &self.m - &rhs.m }
    }
}

impl<T: Real> Neg for &Superoperator<T> {
    type Output = Superoperator<T>;
    fn neg(self) -> Superoperator<T> {
        Superoperator { d: self.d, m: -&self.m }
    }
}

impl<T: Real> AddAssign<&Superoperator<T>> for Superoperator<T> {
    fn add_assign(&mut self, rhs: &Superoperator<T>) {
        self.m += &rhs.m;
    }
}

impl<T: Real> Mul<Complex<T>> for &Superoperator<T> {
    type Output = Superoperator<T>;
    fn mul(self, rhs: Complex<T>) -> Superoperator<T> {
        Superoperator { d: self.d, m: &self.m * rhs }
    }
}
