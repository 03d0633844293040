use nalgebra::ComplexField;
use nalgebra::SymmetricEigen;

use crate::operator::{all_finite, max_norm};
use crate::{CMat, Complex, LinalgError, Operator, Real, Result};

/// `exp(scale * h)`: eigen-decomposition when `h` is Hermitian, Pade
/// scaling-and-squaring otherwise.
pub fn matrix_exp<T: Real>(h: &Operator<T>, scale: Complex<T>) -> Result<Operator<T>> {
    Operator::new(h.tag(), expm(h.matrix(), scale)?)
}

pub fn expm<T: Real>(h: &CMat<T>, scale: Complex<T>) -> Result<CMat<T>> {
    if !all_finite(h) || !scale.re.is_finite() || !scale.im.is_finite() {
        return Err(LinalgError::NonFinite("matrix exponential input"));
    }
    let norm = max_norm(h);
    let tol = T::default_epsilon() * T::lit(64.0) * (T::one() + norm);
    let out = if max_norm(&(h - h.adjoint())) <= tol {
        hermitian_expm(h, scale)
    } else {
        (h * scale).exp()
    };
    if !all_finite(&out) {
        return Err(LinalgError::NonFinite("matrix exponential result"));
    }
    Ok(out)
}

/// `V diag(exp(scale * w)) V^dagger` from the Hermitian part of `h`.
pub fn hermitian_expm<T: Real>(h: &CMat<T>, scale: Complex<T>) -> CMat<T> {
    let n = h.nrows();
    if n == 1 {
        return CMat::from_element(1, 1, (scale * h[(0, 0)].re).exp());
    }
    let herm = (h + h.adjoint()).scale(T::lit(0.5));
    let eig = SymmetricEigen::new(herm);
    let v = &eig.eigenvectors;
    let mut vd = v.clone();
    for (k, &w) in eig.eigenvalues.iter().enumerate() {
        let f = (scale * w).exp();
        for z in vd.column_mut(k).iter_mut() {
            *z *= f;
        }
    }
    vd * v.adjoint()
}

/// Connected components of the sparsity graph of `pattern`: indices `i`, `j`
/// share a block when some chain of nonzero entries links them.
pub fn connected_blocks<T: Real>(pattern: &CMat<T>) -> Vec<Vec<usize>> {
    let n = pattern.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && pattern[(i, j)] != Complex::new(T::zero(), T::zero()) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[r]].push(i);
    }
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{c, cr, SpaceTag};

    #[test]
    fn zero_scale_is_identity() {
        let h = CMat::from_row_slice(2, 2, &[cr(1.0), c(0.0, 2.0), c(0.0, -2.0), cr(3.0)]);
        let u = expm::<f64>(&h, cr(0.0)).unwrap();
        assert!(max_norm(&(u - CMat::identity(2, 2))) < 1e-15);
    }

    #[test]
    fn quarter_turn_of_sigma_x() {
        let sx = CMat::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]);
        let op = Operator::new(SpaceTag::System, sx.clone()).unwrap();
        let u = matrix_exp::<f64>(&op, c(0.0, -std::f64::consts::FRAC_PI_2)).unwrap();
        let want = sx * c(0.0, -1.0);
        assert!(max_norm(&(u.matrix() - want)) < 1e-15);
        let uu = u.matrix() * u.matrix().adjoint();
        assert!(max_norm(&(uu - CMat::identity(2, 2))) < 1e-15);
    }

    #[test]
    fn non_hermitian_uses_pade() {
        // nilpotent: exp(N) = I + N
        let n = CMat::from_row_slice(2, 2, &[cr(0.0), cr(3.0), cr(0.0), cr(0.0)]);
        let u = expm::<f64>(&n, cr(1.0)).unwrap();
        let want = CMat::from_row_slice(2, 2, &[cr(1.0), cr(3.0), cr(0.0), cr(1.0)]);
        assert!(max_norm(&(u - want)) < 1e-14);
    }

    #[test]
    fn rejects_non_finite() {
        let mut h = CMat::<f64>::identity(2, 2);
        h[(1, 0)] = c(f64::NAN, 0.0);
        assert!(expm(&h, cr(1.0)).is_err());
    }

    #[test]
    fn blocks_follow_sparsity() {
        let mut m = CMat::<f64>::zeros(5, 5);
        m[(0, 3)] = cr(1.0);
        m[(3, 0)] = cr(1.0);
        m[(1, 4)] = cr(2.0);
        let b = connected_blocks(&m);
        assert_eq!(b, vec![vec![0, 3], vec![1, 4], vec![2]]);
    }
}
