//! Exact Dyson terms for a Hamiltonian interpolated linearly inside each cell.
//!
//! On a cell of width `h` write `H(u) = (1-u) X_0 + u X_1`. The propagator
//! over the cell is `sum_L (-i h)^L int_{1>u_1>..>u_L>0} H(u_1)..H(u_L)`, and
//! each word of endpoint letters picks up the simplex integral of the
//! matching hat weights. Single integrals reduce to the trapezoid rule.

use noisefold_linalg::{CMat, Complex, Real};

/// `int_{1>u_1>...>u_L>0} prod_k phi_{p_k}(u_k)` with `phi_0 = 1-u`, `phi_1 = u`;
/// `pattern[0]` belongs to the latest time.
pub fn simplex_coefficient(pattern: &[u8]) -> f64 {
    let mut g = vec![1.0f64];
    for &p in pattern.iter().rev() {
        let phi = if p == 0 { [1.0, -1.0] } else { [0.0, 1.0] };
        let mut prod = vec![0.0; g.len() + 1];
        for (i, x) in phi.iter().enumerate() {
            for (j, y) in g.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        g = std::iter::once(0.0)
            .chain(prod.iter().enumerate().map(|(k, c)| c / (k + 1) as f64))
            .collect();
    }
    g.iter().sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    A,
    B,
}

/// Realization-independent pieces of one cell: `k[m][n][r]` collects all
/// words with `m` coupling letters, `n` noise letters and `r` noise letters
/// at the right endpoint. The noise coefficients enter as
/// `a_0^{n-r} a_1^r`.
#[derive(Debug, Clone)]
pub struct CellKernels<T: Real> {
    k: Vec<Vec<Vec<CMat<T>>>>,
}

impl<T: Real> CellKernels<T> {
    /// `a0`, `a1`: coupling at the cell ends; `bop`: lifted noise operator;
    /// words with more than `max_n` noise letters are skipped.
    pub fn new(
        a0: &CMat<T>,
        a1: &CMat<T>,
        bop: Option<&CMat<T>>,
        h: T,
        max_order: usize,
        max_n: usize,
    ) -> Self {
        let dim = a0.nrows();
        let mut k: Vec<Vec<Vec<CMat<T>>>> = (0..=max_order)
            .map(|m| {
                (0..=max_order - m)
                    .map(|n| (0..=n).map(|_| CMat::zeros(dim, dim)).collect())
                    .collect()
            })
            .collect();
        let max_n = if bop.is_some() { max_n } else { 0 };
        let mut letters: Vec<(Kind, u8, &CMat<T>)> = vec![(Kind::A, 0, a0), (Kind::A, 1, a1)];
        if let Some(b) = bop {
            letters.push((Kind::B, 0, b));
            letters.push((Kind::B, 1, b));
        }
        let mih = Complex::new(T::zero(), -h);
        // depth-first over words, growing to the left (later times)
        let mut stack: Vec<(Vec<u8>, usize, usize, usize, CMat<T>)> = letters
            .iter()
            .filter(|l| l.0 == Kind::A || max_n >= 1)
            .map(|&(kind, p, x)| {
                let (m, n, r) = match kind {
                    Kind::A => (1, 0, 0),
                    Kind::B => (0, 1, p as usize),
                };
                (vec![p], m, n, r, x.clone())
            })
            .collect();
        while let Some((pat, m, n, r, prod)) = stack.pop() {
            let len = pat.len();
            let c = T::lit(simplex_coefficient(&pat));
            let mut scale = Complex::new(c, T::zero());
            for _ in 0..len {
                scale *= mih;
            }
            k[m][n][r] += &prod * scale;
            if len == max_order {
                continue;
            }
            for &(kind, p, x) in &letters {
                let (m2, n2, r2) = match kind {
                    Kind::A => (m + 1, n, r),
                    Kind::B => (m, n + 1, r + p as usize),
                };
                if n2 > max_n {
                    continue;
                }
                let mut pat2 = Vec::with_capacity(len + 1);
                pat2.push(p);
                pat2.extend_from_slice(&pat);
                stack.push((pat2, m2, n2, r2, x * &prod));
            }
        }
        Self { k }
    }

    /// `G_(m,0)`, which carries no noise coefficient.
    pub fn shared(&self, m: usize) -> &CMat<T> {
        &self.k[m][0][0]
    }

    /// Cell propagator term `G_(m,n)` for noise values `a0`, `a1`.
    pub fn g(&self, m: usize, n: usize, a0: T, a1: T) -> CMat<T> {
        let ks = &self.k[m][n];
        if n == 0 {
            return ks[0].clone();
        }
        let mut out = CMat::zeros(ks[0].nrows(), ks[0].ncols());
        for (r, kr) in ks.iter().enumerate() {
            let w = a0.powi((n - r) as i32) * a1.powi(r as i32);
            if w != T::zero() {
                out += kr * Complex::new(w, T::zero());
            }
        }
        out
    }
}

/// Weights `w_k` such that `int_0^{t_i} dt' int_0^{t'} dt'' f(t') g(t'')`
/// equals `sum_k w_k g(t_k)` when both factors are linearly interpolated,
/// with `f` given by node values `f[0..=i]`.
pub fn nested_weights<T: Real>(f: &[T], h: T, i: usize) -> Vec<T> {
    let half = h * T::lit(0.5);
    let h2 = h * h;
    let tri = |a: u8, b: u8| T::lit(simplex_coefficient(&[a, b]));
    // cell integrals of f, then suffix sums over later cells
    let alpha: Vec<T> = (0..i).map(|c| half * (f[c] + f[c + 1])).collect();
    let mut later = vec![T::zero(); i + 1];
    for c in (0..i).rev() {
        later[c] = later[c + 1] + alpha[c];
    }
    let mut w = vec![T::zero(); i + 1];
    for c in 0..i {
        for pk in 0..2u8 {
            let k = c + pk as usize;
            let mut v = half * later[c + 1];
            for pj in 0..2u8 {
                v += h2 * tri(pj, pk) * f[c + pj as usize];
            }
            w[k] += v;
        }
    }
    w
}
