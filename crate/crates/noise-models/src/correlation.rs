use noisefold_linalg::{CMat, Complex, Real};

/// `Tr(E rho)`.
pub fn expectation<T: Real>(e: &CMat<T>, rho: &CMat<T>) -> Complex<T> {
    (e * rho).trace()
}

/// `C_mn(t, t') = Tr(E_m(t) E_n(t') rho_E)` given the two evaluated operators.
pub fn bath_correlation<T: Real>(e_m: &CMat<T>, e_n: &CMat<T>, rho: &CMat<T>) -> Complex<T> {
    (e_m * (e_n * rho)).trace()
}

/// Correlation with the product of single-operator means removed.
pub fn connected_bath_correlation<T: Real>(
    e_m: &CMat<T>,
    e_n: &CMat<T>,
    rho: &CMat<T>,
) -> Complex<T> {
    bath_correlation(e_m, e_n, rho) - expectation(e_m, rho) * expectation(e_n, rho)
}
