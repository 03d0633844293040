use std::path::PathBuf;
use std::str::FromStr;

use noisefold_hamiltonian::Convention;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    VerifyCancellation,
    VerifyYMap,
    InterferenceL21,
    Zeeman,
    Convergence,
    OracleCompare,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::VerifyCancellation => "verify-cancellation",
            Experiment::VerifyYMap => "verify-y-map",
            Experiment::InterferenceL21 => "interference-l21",
            Experiment::Zeeman => "zeeman",
            Experiment::Convergence => "convergence",
            Experiment::OracleCompare => "oracle-compare",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub dt: f64,
    pub n_steps: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { dt: 0.025, n_steps: 400 }
    }
}

/// One or more cavity modes; `beta = inf` selects zero temperature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BathConfig {
    pub omega_k: Vec<f64>,
    pub g_k: Vec<f64>,
    pub beta: f64,
    pub n_max: usize,
    pub omega_0: f64,
}

impl Default for BathConfig {
    fn default() -> Self {
        Self { omega_k: vec![1.3], g_k: vec![0.3], beta: 1.0, n_max: 4, omega_0: 1.0 }
    }
}

/// OU coefficient `a(t) = mean + x(t)` with kernel `sigma^2 exp(-gamma |t - t'|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub sigma: f64,
    pub gamma: f64,
    pub seed: u64,
    #[serde(rename = "R")]
    pub r: usize,
    pub mean: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self { sigma: 0.3, gamma: 1.0, seed: 7, r: 200, mean: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StrengthConfig {
    pub lambda: f64,
    pub delta: f64,
}

impl Default for StrengthConfig {
    fn default() -> Self {
        Self { lambda: 1.0, delta: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub grid: GridConfig,
    pub bath: BathConfig,
    pub noise: NoiseConfig,
    pub strengths: StrengthConfig,
    /// Perturbative order `P` of the maps.
    pub order: usize,
    pub convention: String,
    /// Accept the halved ladder convention in the decay analysis.
    pub rescale: bool,
    /// Random instances for `verify-cancellation`.
    pub instances: usize,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::Zeeman,
            grid: GridConfig::default(),
            bath: BathConfig::default(),
            noise: NoiseConfig::default(),
            strengths: StrengthConfig::default(),
            order: 2,
            convention: "paper".into(),
            rescale: false,
            instances: 20,
            output_dir: PathBuf::from("noisefold-out"),
        }
    }
}

fn field(name: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{name}: {msg}"))
}

fn finite(name: &str, x: f64) -> Result<(), CliError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(field(name, format!("must be finite, got {x}")))
    }
}

impl RunConfig {
    pub fn convention(&self) -> Result<Convention, CliError> {
        Convention::from_str(&self.convention).map_err(|_| {
            field("convention", format!("expected `paper` or `halved`, got {:?}", self.convention))
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        finite("grid.dt", self.grid.dt)?;
        if self.grid.dt <= 0.0 {
            return Err(field("grid.dt", "must be > 0"));
        }
        if self.bath.omega_k.is_empty() {
            return Err(field("bath.omega_k", "needs at least one mode"));
        }
        if self.bath.omega_k.len() != self.bath.g_k.len() {
            return Err(field(
                "bath.g_k",
                format!("has {} entries, bath.omega_k has {}", self.bath.g_k.len(), self.bath.omega_k.len()),
            ));
        }
        for (k, (&w, &g)) in self.bath.omega_k.iter().zip(&self.bath.g_k).enumerate() {
            finite(&format!("bath.omega_k[{k}]"), w)?;
            finite(&format!("bath.g_k[{k}]"), g)?;
            if w <= 0.0 {
                return Err(field(&format!("bath.omega_k[{k}]"), "must be > 0"));
            }
        }
        if self.bath.beta.is_nan() || self.bath.beta <= 0.0 {
            return Err(field("bath.beta", "must be > 0 (use inf for zero temperature)"));
        }
        if self.bath.n_max == 0 {
            return Err(field("bath.n_max", "must be >= 1"));
        }
        finite("bath.omega_0", self.bath.omega_0)?;
        if self.bath.omega_0 <= 0.0 {
            return Err(field("bath.omega_0", "must be > 0"));
        }
        finite("noise.sigma", self.noise.sigma)?;
        finite("noise.gamma", self.noise.gamma)?;
        finite("noise.mean", self.noise.mean)?;
        if self.noise.sigma < 0.0 {
            return Err(field("noise.sigma", "must be >= 0"));
        }
        if self.noise.gamma <= 0.0 {
            return Err(field("noise.gamma", "must be > 0"));
        }
        if self.noise.r == 0 {
            return Err(field("noise.R", "must be >= 1"));
        }
        for (name, x) in [("strengths.lambda", self.strengths.lambda), ("strengths.delta", self.strengths.delta)] {
            finite(name, x)?;
            if x < 0.0 {
                return Err(field(name, "must be >= 0"));
            }
        }
        if self.order == 0 || self.order > noisefold_perturbation::DEFAULT_ORDER_LIMIT {
            return Err(field(
                "order",
                format!("must be in 1..={}, got {}", noisefold_perturbation::DEFAULT_ORDER_LIMIT, self.order),
            ));
        }
        self.convention()?;
        match self.experiment {
            Experiment::VerifyCancellation if self.instances == 0 => {
                return Err(field("instances", "must be >= 1"));
            }
            Experiment::VerifyCancellation | Experiment::VerifyYMap | Experiment::InterferenceL21 if self.grid.n_steps < 5 => {
                return Err(field("grid.n_steps", "must be >= 5 for this experiment"));
            }
            Experiment::InterferenceL21 if self.noise.mean == 0.0 => {
                return Err(field("noise.mean", "interference-l21 needs a nonzero classical mean"));
            }
            Experiment::VerifyYMap | Experiment::InterferenceL21 if self.order < 3 => {
                return Err(field("order", "this experiment needs order >= 3"));
            }
            _ => {}
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str, overrides: &[String]) -> Result<Self, CliError> {
        let mut value: toml::Value = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        for o in overrides {
            apply_override(&mut value, o)?;
        }
        let cfg: RunConfig = value.try_into().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

/// `a.b.c=value`: the value is parsed as TOML, falling back to a bare string.
pub fn apply_override(root: &mut toml::Value, assignment: &str) -> Result<(), CliError> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--set {assignment:?}: expected key=value")))?;
    let path = path.trim();
    if path.is_empty() {
        return Err(CliError::Config(format!("--set {assignment:?}: empty key")));
    }
    let parsed = toml::from_str::<toml::Table>(&format!("v = {}", raw.trim()))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.trim().to_string()));
    let keys: Vec<&str> = path.split('.').collect();
    let mut cur = root;
    for k in &keys[..keys.len() - 1] {
        let table = cur
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("--set {path}: `{k}` is not a table")))?;
        cur = table.entry(k.to_string()).or_insert_with(|| toml::Value::Table(Default::default()));
    }
    let table = cur
        .as_table_mut()
        .ok_or_else(|| CliError::Config(format!("--set {path}: parent is not a table")))?;
    table.insert(keys[keys.len() - 1].to_string(), parsed);
    Ok(())
}
