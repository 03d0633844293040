use std::fmt;
use std::str::FromStr;

use noisefold_linalg::{cr, CMat, Real};

use crate::HamiltonianError;

/// Ladder-operator normalization.
///
/// `Paper` uses `sigma_pm = sigma_x +- i sigma_y`, so `sigma_+ |1> = 2 |0>`;
/// `Halved` uses the textbook `(sigma_x +- i sigma_y) / 2`. Coherence decay
/// rates from the cavity carry a factor 4 under `Paper` and 1 under `Halved`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    #[default]
    Paper,
    Halved,
}

impl Convention {
    /// Scale of `sigma_+` relative to the textbook operator.
    pub fn ladder_scale(self) -> f64 {
        match self {
            Convention::Paper => 2.0,
            Convention::Halved => 1.0,
        }
    }
}

impl FromStr for Convention {
    type Err = HamiltonianError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(Convention::Paper),
            "halved" => Ok(Convention::Halved),
            other => Err(HamiltonianError::UnknownConvention(other.to_string())),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Paper => "paper",
            Convention::Halved => "halved",
        })
    }
}

/// Basis order `|0> = spin up`, `|1> = spin down`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliOps<T: Real> {
    pub sz: CMat<T>,
    pub sp: CMat<T>,
    pub sm: CMat<T>,
}

pub fn pauli_ops<T: Real>(convention: Convention) -> PauliOps<T> {
    let s = convention.ladder_scale();
    let sz = CMat::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)]);
    let sp = CMat::from_row_slice(2, 2, &[cr(0.0), cr(s), cr(0.0), cr(0.0)]);
    let sm = sp.adjoint();
    PauliOps { sz, sp, sm }
}
