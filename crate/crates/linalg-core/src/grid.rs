use crate::{LinalgError, Real, Result};

/// Uniform grid `t_i = i * dt`, `i = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    dt: T,
    n_steps: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(dt: T, n_steps: usize) -> Result<Self> {
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(LinalgError::Grid("dt must be positive and finite".into()));
        }
        Ok(Self { dt, n_steps })
    }

    /// Grid covering `[0, t_end]` with `n_steps` cells.
    pub fn spanning(t_end: T, n_steps: usize) -> Result<Self> {
        if n_steps == 0 {
            return Err(LinalgError::Grid("spanning grid needs n_steps >= 1".into()));
        }
        Self::new(t_end / T::from_usize(n_steps).unwrap(), n_steps)
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t(&self, i: usize) -> T {
        T::from_usize(i).unwrap() * self.dt
    }

    pub fn t_end(&self) -> T {
        self.t(self.n_steps)
    }

    pub fn points(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.len()).map(|i| self.t(i))
    }

    /// Trapezoid weights for `int_0^{t_i}` over nodes `0..=i`.
    pub fn trapezoid_weights(&self, i: usize) -> Vec<T> {
        let mut w = vec![self.dt; i + 1];
        if i == 0 {
            w[0] = T::zero();
        } else {
            let half = self.dt * T::lit(0.5);
            w[0] = half;
            w[i] = half;
        }
        w
    }

    /// Cumulative trapezoid integral of node values.
    pub fn cumulative_trapezoid(&self, f: &[T]) -> Vec<T> {
        let half = self.dt * T::lit(0.5);
        let mut out = Vec::with_capacity(f.len());
        let mut acc = T::zero();
        out.push(acc);
        for w in f.windows(2) {
            acc += half * (w[0] + w[1]);
            out.push(acc);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_are_increasing() {
        let g = TimeGrid::new(0.25_f64, 8).unwrap();
        let p: Vec<f64> = g.points().collect();
        assert_eq!(p.len(), 9);
        assert!(p.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(g.t_end(), 2.0);
    }

    #[test]
    fn rejects_nonpositive_dt() {
        assert!(TimeGrid::new(0.0_f64, 3).is_err());
        assert!(TimeGrid::new(-1.0_f32, 3).is_err());
        assert!(TimeGrid::new(f64::NAN, 3).is_err());
    }

    #[test]
    fn trapezoid_integrates_linear_exactly() {
        let g = TimeGrid::new(0.1_f64, 10).unwrap();
        let f: Vec<f64> = g.points().map(|t| 3.0 * t + 1.0).collect();
        let cum = g.cumulative_trapezoid(&f);
        let w = g.trapezoid_weights(10);
        let direct: f64 = w.iter().zip(&f).map(|(a, b)| a * b).sum();
        assert!((cum[10] - 2.5).abs() < 1e-14);
        assert!((direct - 2.5).abs() < 1e-14);
    }
}
