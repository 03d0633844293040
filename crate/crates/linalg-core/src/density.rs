use nalgebra::SymmetricEigen;

use crate::operator::{all_finite, max_norm};
use crate::{CMat, LinalgError, Operator, Real, Result, SpaceTag};

/// Default validity tolerance. Truncated master equations may dip slightly
/// below zero in transients, so the eigenvalue floor is `-tolerance`.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    op: Operator<T>,
    tolerance: T,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(op: Operator<T>, tolerance: T) -> Result<Self> {
        let m = op.matrix();
        let herm = op.hermiticity_defect();
        if herm > tolerance {
            return Err(LinalgError::NotDensity(format!("hermiticity defect {herm}")));
        }
        let tr = m.trace();
        if (tr.re - T::one()).abs() > tolerance || tr.im.abs() > tolerance {
            return Err(LinalgError::NotDensity(format!("trace {tr}")));
        }
        let lo = min_eigenvalue(m);
        if lo < -tolerance {
            return Err(LinalgError::NotDensity(format!("minimum eigenvalue {lo}")));
        }
        Ok(Self { op, tolerance })
    }

    pub fn from_matrix(tag: SpaceTag, m: CMat<T>) -> Result<Self> {
        Self::new(Operator::new(tag, m)?, T::lit(DEFAULT_TOLERANCE))
    }

    /// Pure state `|psi><psi|` from an unnormalized vector.
    pub fn pure(tag: SpaceTag, psi: &[crate::Complex<T>]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(psi);
        let n2 = v.norm_squared();
        if !(n2 > T::zero()) {
            return Err(LinalgError::NotDensity("zero state vector".into()));
        }
        let m = (&v * v.adjoint()).unscale(n2);
        Self::from_matrix(tag, m)
    }

    pub fn operator(&self) -> &Operator<T> {
        &self.op
    }

    pub fn matrix(&self) -> &CMat<T> {
        self.op.matrix()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn tolerance(&self) -> T {
        self.tolerance
    }
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn min_eigenvalue<T: Real>(m: &CMat<T>) -> T {
    if !all_finite(m) {
        return T::lit(f64::NAN);
    }
    let h = (m + m.adjoint()).scale(T::lit(0.5));
    let eig = SymmetricEigen::new(h);
    eig.eigenvalues.iter().fold(T::max_value().unwrap(), |a, &b| a.min(b))
}

/// `(1/2) ||a - b||_1` for Hermitian arguments.
pub fn trace_distance<T: Real>(a: &CMat<T>, b: &CMat<T>) -> T {
    let d = a - b;
    let h = (&d + d.adjoint()).scale(T::lit(0.5));
    if max_norm(&h) == T::zero() {
        return T::zero();
    }
    let eig = SymmetricEigen::new(h);
    eig.eigenvalues.iter().fold(T::zero(), |s, x| s + x.abs()) * T::lit(0.5)
}
