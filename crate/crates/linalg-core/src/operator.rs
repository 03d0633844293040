use nalgebra::ComplexField;
use nalgebra::DMatrix;

use crate::{CMat, Complex, LinalgError, Real, Result};

/// Default cap on joint Hilbert-space dimension.
pub const DEFAULT_JOINT_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceTag {
    System,
    Environment,
    Joint,
}

/// Square complex operator tagged with the space it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator<T: Real> {
    tag: SpaceTag,
    m: CMat<T>,
}

impl<T: Real> Operator<T> {
    pub fn new(tag: SpaceTag, m: CMat<T>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(LinalgError::Dimension(format!(
                "operator must be square and nonempty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if !all_finite(&m) {
            return Err(LinalgError::NonFinite("operator"));
        }
        Ok(Self { tag, m })
    }

    pub fn identity(tag: SpaceTag, dim: usize) -> Self {
        Self { tag, m: CMat::identity(dim, dim) }
    }

    pub fn zeros(tag: SpaceTag, dim: usize) -> Self {
        Self { tag, m: CMat::zeros(dim, dim) }
    }

    pub fn tag(&self) -> SpaceTag {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.m
    }

    pub fn into_matrix(self) -> CMat<T> {
        self.m
    }

    pub fn adjoint(&self) -> Self {
        Self { tag: self.tag, m: self.m.adjoint() }
    }

    pub fn max_norm(&self) -> T {
        max_norm(&self.m)
    }

    /// `max |A - A^dagger|`.
    pub fn hermiticity_defect(&self) -> T {
        max_norm(&(&self.m - self.m.adjoint()))
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn trace(&self) -> Complex<T> {
        self.m.trace()
    }
}

pub(crate) fn all_finite<T: Real>(m: &CMat<T>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub(crate) fn max_norm<T: Real>(m: &CMat<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(z.modulus()))
}

/// Largest entry modulus.
pub fn max_abs<T: Real>(m: &CMat<T>) -> T {
    max_norm(m)
}

/// `max |A - A^dagger|`.
pub fn hermiticity_defect<T: Real>(m: &CMat<T>) -> T {
    max_norm(&(m - m.adjoint()))
}

/// Kronecker product with `a` as the outer (slow) index.
pub fn kron<T: Real>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    a.kronecker(b)
}

pub fn tensor_product<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Result<Operator<T>> {
    tensor_product_capped(a, b, DEFAULT_JOINT_CAP)
}

pub fn tensor_product_capped<T: Real>(
    a: &Operator<T>,
    b: &Operator<T>,
    cap: usize,
) -> Result<Operator<T>> {
    let dim = a.dim().checked_mul(b.dim()).unwrap_or(usize::MAX);
    if dim > cap {
        return Err(LinalgError::Capacity { dim, cap });
    }
    Ok(Operator { tag: SpaceTag::Joint, m: kron(&a.m, &b.m) })
}

/// `(Tr_E J)_{ab} = sum_m J_{(a,m),(b,m)}` on raw matrices.
pub fn ptrace_env<T: Real>(j: &CMat<T>, sys_dim: usize, env_dim: usize) -> CMat<T> {
    DMatrix::from_fn(sys_dim, sys_dim, |a, b| {
        let mut s = Complex::new(T::zero(), T::zero());
        for m in 0..env_dim {
            s += j[(a * env_dim + m, b * env_dim + m)];
        }
        s
    })
}

pub fn partial_trace_env<T: Real>(
    j: &Operator<T>,
    sys_dim: usize,
    env_dim: usize,
) -> Result<Operator<T>> {
    if sys_dim == 0 || env_dim == 0 || sys_dim * env_dim != j.dim() {
        return Err(LinalgError::Dimension(format!(
            "cannot factor dimension {} as {} x {}",
            j.dim(),
            sys_dim,
            env_dim
        )));
    }
    Ok(Operator { tag: SpaceTag::System, m: ptrace_env(&j.m, sys_dim, env_dim) })
}
