use noisefold_linalg::{trace_distance, CMat, Complex, Real, TimeGrid};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrajectoryMeta {
    /// Highest total perturbative order in the generator (0 for the oracle).
    pub order: usize,
    pub lambda: f64,
    pub delta: f64,
    pub seeds: Vec<u64>,
    pub realizations: usize,
}

/// Per-run monitors. Positivity is reported, never enforced.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics {
    pub max_trace_deviation: f64,
    pub max_symmetrization: f64,
    pub min_eigenvalue: f64,
    /// Steps whose minimum eigenvalue fell below `-POSITIVITY_TOLERANCE`.
    pub positivity_violations: Vec<usize>,
}

pub const POSITIVITY_TOLERANCE: f64 = 1e-9;

/// Reduced states on every grid node.
#[derive(Debug, Clone)]
pub struct Trajectory<T: Real> {
    grid: TimeGrid<T>,
    states: Vec<CMat<T>>,
    /// Element-wise standard error of ensemble means; `re` and `im` carry the
    /// errors of the real and imaginary parts.
    standard_errors: Option<Vec<CMat<T>>>,
    meta: TrajectoryMeta,
    diagnostics: Diagnostics,
}

impl<T: Real> Trajectory<T> {
    pub(crate) fn new(
        grid: TimeGrid<T>,
        states: Vec<CMat<T>>,
        standard_errors: Option<Vec<CMat<T>>>,
        meta: TrajectoryMeta,
        diagnostics: Diagnostics,
    ) -> Self {
        Self { grid, states, standard_errors, meta, diagnostics }
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn states(&self) -> &[CMat<T>] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &CMat<T> {
        &self.states[i]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn meta(&self) -> &TrajectoryMeta {
        &self.meta
    }

    pub fn diagnostics(&self) -> &Diagnostics {
        &self.diagnostics
    }

    pub fn standard_errors(&self) -> Option<&[CMat<T>]> {
        self.standard_errors.as_deref()
    }

    pub fn rho01(&self) -> Vec<Complex<T>> {
        self.states.iter().map(|r| r[(0, 1)]).collect()
    }

    /// `max_t D(self(t), other(t))`.
    pub fn max_trace_distance(&self, other: &Self) -> T {
        self.states
            .iter()
            .zip(&other.states)
            .fold(T::zero(), |m, (a, b)| m.max(trace_distance(a, b)))
    }

    /// Largest one-sigma error of the trace distance to a deterministic
    /// reference, linearized: for a 2x2 traceless difference the distance
    /// is `sqrt(x00^2 + |x01|^2)`, so the element errors add in quadrature.
    /// Zero when the trajectory is not an ensemble estimate.
    pub fn trace_distance_error(&self) -> T {
        let Some(se) = &self.standard_errors else {
            return T::zero();
        };
        se.iter().fold(T::zero(), |m, e| {
            let s = e[(0, 0)].re * e[(0, 0)].re
                + e[(0, 1)].re * e[(0, 1)].re
                + e[(0, 1)].im * e[(0, 1)].im;
            m.max(s.sqrt())
        })
    }
}

impl<T: Real> Trajectory<T> {
    pub fn with_seeds(mut self, seeds: Vec<u64>) -> Self {
        self.meta.seeds = seeds;
        self
    }
}
