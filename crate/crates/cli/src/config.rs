//! Flat JSON experiment configuration.
//!
//! Every scenario parameter is a top-level key with a default; unknown keys
//! are rejected. Powers are given in dB here and converted to linear ratios
//! once, when the scenario is built.

use std::fmt;
use std::path::{Path, PathBuf};

use cogest::model::db_to_linear;
use cogest::{
    Decision, EnergyPolicy, EstimatorKind, FadingParams, FramePlan, GridSpec, InputKind, NoiseParams, Scenario,
    SensingModel,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("invalid config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: String, reason: String },
    #[error("unknown preset `{0}` (available: {list})", list = PRESET_NAMES.join(", "))]
    UnknownPreset(String),
    #[error("cannot read config {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
}

fn invalid(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { key: key.to_string(), reason: reason.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepVariable {
    #[serde(rename = "p_f")]
    FalseAlarm,
    #[serde(rename = "p_d")]
    Detection,
    #[serde(rename = "m")]
    PilotPeriod,
    #[serde(rename = "sigma_s2_over_sigma_n2")]
    InterferenceRatio,
    #[serde(rename = "mu0")]
    MuIdle,
    #[serde(rename = "mu1")]
    MuBusy,
    #[serde(rename = "snr_idle_db")]
    SnrIdleDb,
}

impl SweepVariable {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVariable::FalseAlarm => "p_f",
            SweepVariable::Detection => "p_d",
            SweepVariable::PilotPeriod => "m",
            SweepVariable::InterferenceRatio => "sigma_s2_over_sigma_n2",
            SweepVariable::MuIdle => "mu0",
            SweepVariable::MuBusy => "mu1",
            SweepVariable::SnrIdleDb => "snr_idle_db",
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

impl SweepSpec {
    /// Inclusive grid `from, from + step, …, ≤ to`.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.to - self.from) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| ((self.from + i as f64 * self.step) * 1e12).round() / 1e12).collect()
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if !self.from.is_finite() || !self.to.is_finite() {
            return Err(invalid("sweep", "from and to must be finite"));
        }
        if self.from > self.to {
            return Err(invalid("sweep.from", format!("{} exceeds sweep.to = {}", self.from, self.to)));
        }
        if self.step.is_nan() || self.step <= 0.0 {
            return Err(invalid("sweep.step", "must be positive"));
        }
        if self.variable == SweepVariable::PilotPeriod && self.values().iter().any(|v| v.fract() != 0.0) {
            return Err(invalid("sweep", "pilot period values must be integers"));
        }
        Ok(())
    }
}

/// Optimizer grid; omitted bounds fall back to the scenario or the defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub m_min: usize,
    pub m_max: usize,
    pub mu_step: f64,
    pub mu0_from: f64,
    pub mu0_to: f64,
    pub mu1_from: f64,
    pub mu1_to: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = GridSpec::default();
        GridConfig {
            m_min: g.m_min,
            m_max: g.m_max,
            mu_step: g.mu_step,
            mu0_from: g.mu_idle.0,
            mu0_to: g.mu_idle.1,
            mu1_from: g.mu_busy.0,
            mu1_to: g.mu_busy.1,
        }
    }
}

impl GridConfig {
    pub fn spec(&self) -> GridSpec {
        GridSpec {
            m_min: self.m_min,
            m_max: self.m_max,
            mu_step: self.mu_step,
            mu_idle: (self.mu0_from, self.mu0_to),
            mu_busy: (self.mu1_from, self.mu1_to),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub alpha: f64,
    pub sigma_r2: f64,
    pub sigma_n2: f64,
    pub sigma_s2: f64,
    pub p_d: f64,
    pub p_f: f64,
    pub prior_busy: f64,
    pub m: usize,
    pub l_blocks: usize,
    pub k_pilots: usize,
    /// `10 log10(P̄0 / (B σ_n²))`.
    pub snr_idle_db: f64,
    /// `10 log10(P̄1 / (B σ_n²))`; ignored in interweave mode.
    pub snr_busy_db: f64,
    pub mu0: f64,
    pub mu1: f64,
    /// Fixes `E_t,0`; μ0 is then derived at every sweep point.
    pub pilot_energy_idle: Option<f64>,
    /// Fixes `E_t,1`; μ1 is then derived at every sweep point.
    pub pilot_energy_busy: Option<f64>,
    /// Transmit only when the channel is sensed idle (`P̄1 = 0`, `E_t,1 = 0`).
    pub interweave: bool,
    pub sweep: Option<SweepSpec>,
    /// MSE trials per point, or outer channel draws per decision for rates.
    pub trials: Option<usize>,
    pub inner_samples: usize,
    pub seed: u64,
    pub estimators: Vec<EstimatorKind>,
    /// Estimator feeding `r̂` into the rate computations.
    pub rate_estimator: EstimatorKind,
    pub inputs: Vec<InputKind>,
    pub grid: Option<GridConfig>,
    pub output_path: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let s = Scenario::default();
        ExperimentConfig {
            alpha: s.fading.alpha,
            sigma_r2: s.fading.sigma_r2,
            sigma_n2: s.noise.sigma_n2,
            sigma_s2: s.noise.sigma_s2,
            p_d: s.sensing.p_d,
            p_f: s.sensing.p_f,
            prior_busy: s.sensing.prior_busy,
            m: s.frame.m,
            l_blocks: s.frame.l_blocks,
            k_pilots: s.frame.k_pilots,
            snr_idle_db: 10.0,
            snr_busy_db: 0.0,
            mu0: s.energy.mu_idle,
            mu1: s.energy.mu_busy,
            pilot_energy_idle: None,
            pilot_energy_busy: None,
            interweave: false,
            sweep: None,
            trials: None,
            inner_samples: 200,
            seed: 1,
            estimators: vec![EstimatorKind::Mmse, EstimatorKind::Lmmse],
            rate_estimator: EstimatorKind::Lmmse,
            inputs: vec![InputKind::Bpsk, InputKind::Gaussian],
            grid: None,
            output_path: None,
        }
    }
}

pub const DEFAULT_MSE_TRIALS: usize = 100_000;
pub const DEFAULT_RATE_TRIALS: usize = 2_000;

const PRESETS: [(&str, &str); 9] = [
    ("fig3", include_str!("../presets/fig3.json")),
    ("fig4", include_str!("../presets/fig4.json")),
    ("fig5", include_str!("../presets/fig5.json")),
    ("fig6", include_str!("../presets/fig6.json")),
    ("fig7", include_str!("../presets/fig7.json")),
    ("fig8", include_str!("../presets/fig8.json")),
    ("fig9", include_str!("../presets/fig9.json")),
    ("fig10", include_str!("../presets/fig10.json")),
    ("interweave", include_str!("../presets/interweave.json")),
];

pub const PRESET_NAMES: [&str; 9] = ["fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "interweave"];

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
        Self::from_json(&text)
    }

    pub fn preset(name: &str) -> Result<Self, ConfigError> {
        let (_, text) =
            PRESETS.iter().find(|(n, _)| *n == name).ok_or_else(|| ConfigError::UnknownPreset(name.to_string()))?;
        Self::from_json(text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Some(sweep) = &self.sweep {
            sweep.validate()?;
            let conflict = match sweep.variable {
                SweepVariable::MuIdle => self.pilot_energy_idle.is_some().then_some("pilot_energy_idle"),
                SweepVariable::MuBusy => self.pilot_energy_busy.is_some().then_some("pilot_energy_busy"),
                _ => None,
            };
            if let Some(key) = conflict {
                return Err(invalid(key, format!("cannot fix the pilot energy while sweeping {}", sweep.variable)));
            }
        }
        if self.trials == Some(0) {
            return Err(invalid("trials", "must be positive"));
        }
        if self.inner_samples == 0 {
            return Err(invalid("inner_samples", "must be positive"));
        }
        if self.estimators.is_empty() {
            return Err(invalid("estimators", "list is empty"));
        }
        if self.inputs.is_empty() {
            return Err(invalid("inputs", "list is empty"));
        }
        for (key, v) in [("pilot_energy_idle", self.pilot_energy_idle), ("pilot_energy_busy", self.pilot_energy_busy)] {
            if matches!(v, Some(e) if !(e >= 0.0 && e.is_finite())) {
                return Err(invalid(key, "must be a finite non-negative energy"));
            }
        }
        if let Some(g) = &self.grid {
            g.spec().validate().map_err(|e| invalid("grid", e.to_string()))?;
        }
        for value in self.sweep_values() {
            self.scenario_at(value)?;
        }
        Ok(())
    }

    /// Sweep grid, or the single value `NaN` when there is no sweep.
    pub fn sweep_values(&self) -> Vec<f64> {
        match &self.sweep {
            Some(s) => s.values(),
            None => vec![f64::NAN],
        }
    }

    pub fn sweep_variable(&self) -> Option<SweepVariable> {
        self.sweep.map(|s| s.variable)
    }

    pub fn mse_trials(&self) -> usize {
        self.trials.unwrap_or(DEFAULT_MSE_TRIALS)
    }

    pub fn rate_trials(&self) -> usize {
        self.trials.unwrap_or(DEFAULT_RATE_TRIALS)
    }

    pub fn grid_spec(&self) -> GridSpec {
        match &self.grid {
            Some(g) => g.spec(),
            None => GridSpec { m_min: self.m, m_max: self.m, ..GridSpec::default() },
        }
    }

    /// Scenario without the sweep applied.
    pub fn base_scenario(&self) -> Result<Scenario, ConfigError> {
        self.scenario_at(f64::NAN)
    }

    /// Scenario with the sweep variable set to `value` (`NaN` for none).
    pub fn scenario_at(&self, value: f64) -> Result<Scenario, ConfigError> {
        let mut c = self.clone();
        if let (Some(var), false) = (self.sweep_variable(), value.is_nan()) {
            match var {
                SweepVariable::FalseAlarm => c.p_f = value,
                SweepVariable::Detection => c.p_d = value,
                SweepVariable::PilotPeriod => {
                    if value < 0.0 || value.fract() != 0.0 {
                        return Err(invalid("m", format!("{value} is not a pilot period")));
                    }
                    c.m = value as usize;
                }
                SweepVariable::InterferenceRatio => c.sigma_s2 = value * c.sigma_n2,
                SweepVariable::MuIdle => c.mu0 = value,
                SweepVariable::MuBusy => c.mu1 = value,
                SweepVariable::SnrIdleDb => c.snr_idle_db = value,
            }
        }
        let snr_busy = if c.interweave { 0.0 } else { db_to_linear(c.snr_busy_db) };
        let mut s = Scenario {
            fading: FadingParams { alpha: c.alpha, sigma_r2: c.sigma_r2 },
            noise: NoiseParams { sigma_n2: c.sigma_n2, sigma_s2: c.sigma_s2 },
            sensing: SensingModel { p_d: c.p_d, p_f: c.p_f, prior_busy: c.prior_busy },
            frame: FramePlan { m: c.m, l_blocks: c.l_blocks, k_pilots: c.k_pilots },
            energy: EnergyPolicy { snr_idle: db_to_linear(c.snr_idle_db), snr_busy, mu_idle: c.mu0, mu_busy: c.mu1 },
        };
        if c.interweave {
            s.energy.mu_busy = 0.0;
        }
        for (decision, key, fixed) in [
            (Decision::Idle, "pilot_energy_idle", c.pilot_energy_idle),
            (Decision::Busy, "pilot_energy_busy", if c.interweave { None } else { c.pilot_energy_busy }),
        ] {
            if let Some(e) = fixed {
                let block = s.energy.block_energy(&s.frame, &s.noise, decision);
                let mu = if e == 0.0 { 0.0 } else { e / block };
                if !(0.0..=1.0).contains(&mu) {
                    return Err(invalid(key, format!("{e} exceeds the block energy {block}")));
                }
                s.energy.set_mu(decision, mu);
            }
        }
        s.validate().map_err(|e| invalid(scenario_key(&e), e.to_string()))?;
        Ok(s)
    }
}

fn scenario_key(e: &cogest::Error) -> &'static str {
    match e {
        cogest::Error::InvalidParameter { name, .. } => match *name {
            "mu_idle" => "mu0",
            "mu_busy" => "mu1",
            "snr_idle" => "snr_idle_db",
            "snr_busy" => "snr_busy_db",
            other => other,
        },
        _ => "scenario",
    }
}
