//! Scenario parameters and the closed-form sensing/energy bookkeeping.
//!
//! Powers are carried as linear ratios `P/(B σ_n²)`; every energy and
//! variance in the crate is in normalized (dimensionless) units.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// True primary-user activity in a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hypothesis {
    Idle,
    Busy,
}

/// Outcome of channel sensing at the start of a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Idle,
    Busy,
}

impl Hypothesis {
    pub const ALL: [Hypothesis; 2] = [Hypothesis::Idle, Hypothesis::Busy];

    pub fn index(self) -> usize {
        match self {
            Hypothesis::Idle => 0,
            Hypothesis::Busy => 1,
        }
    }
}

impl Decision {
    pub const ALL: [Decision; 2] = [Decision::Idle, Decision::Busy];

    pub fn index(self) -> usize {
        match self {
            Decision::Idle => 0,
            Decision::Busy => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Idle => "idle",
            Decision::Busy => "busy",
        }
    }
}

/// First-order Gauss-Markov fading statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FadingParams {
    /// Per-symbol correlation coefficient, `0 ≤ alpha ≤ 1`.
    pub alpha: f64,
    /// Fading power `σ_r²`.
    pub sigma_r2: f64,
}

impl FadingParams {
    pub fn validate(&self) -> Result<()> {
        check_range("alpha", self.alpha, 0.0, 1.0)?;
        check_positive("sigma_r2", self.sigma_r2)
    }

    /// Variance of the innovation driving the recursion.
    pub fn innovation_variance(&self) -> f64 {
        (1.0 - self.alpha * self.alpha) * self.sigma_r2
    }
}

/// Background noise and primary-user interference powers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub sigma_n2: f64,
    pub sigma_s2: f64,
}

impl NoiseParams {
    pub fn validate(&self) -> Result<()> {
        check_positive("sigma_n2", self.sigma_n2)?;
        check_non_negative("sigma_s2", self.sigma_s2)
    }
}

/// Sensing reliability and primary-user activity prior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensingModel {
    /// Pr{decide busy | busy}.
    pub p_d: f64,
    /// Pr{decide busy | idle}.
    pub p_f: f64,
    /// Pr{H1}.
    pub prior_busy: f64,
}

impl SensingModel {
    pub fn validate(&self) -> Result<()> {
        check_range("p_d", self.p_d, 0.0, 1.0)?;
        check_range("p_f", self.p_f, 0.0, 1.0)?;
        check_range("prior_busy", self.prior_busy, 0.0, 1.0)
    }

    pub fn prior(&self, h: Hypothesis) -> f64 {
        match h {
            Hypothesis::Idle => 1.0 - self.prior_busy,
            Hypothesis::Busy => self.prior_busy,
        }
    }

    /// Pr{Ĥj | Hi}.
    pub fn decision_likelihood(&self, decision: Decision, truth: Hypothesis) -> f64 {
        let p_busy = match truth {
            Hypothesis::Idle => self.p_f,
            Hypothesis::Busy => self.p_d,
        };
        match decision {
            Decision::Idle => 1.0 - p_busy,
            Decision::Busy => p_busy,
        }
    }

    /// Pr{Ĥj}.
    pub fn decision_probability(&self, decision: Decision) -> f64 {
        let (idle, busy) = sensing_marginals(self);
        match decision {
            Decision::Idle => idle,
            Decision::Busy => busy,
        }
    }
}

/// Frame geometry: pilot period `M`, blocks per frame `L`, pilots used `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FramePlan {
    pub m: usize,
    pub l_blocks: usize,
    pub k_pilots: usize,
}

impl FramePlan {
    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::invalid("m", self.m as f64, "pilot period must be at least 2"));
        }
        if self.l_blocks < 1 {
            return Err(Error::invalid("l_blocks", self.l_blocks as f64, "need at least one block"));
        }
        if self.k_pilots < 1 || self.k_pilots > self.l_blocks {
            return Err(Error::invalid("k_pilots", self.k_pilots as f64, "must satisfy 1 <= k_pilots <= l_blocks"));
        }
        Ok(())
    }

    /// Number of fading coefficients covered by one estimate: `K + M − 1`.
    pub fn block_len(&self) -> usize {
        self.k_pilots + self.m - 1
    }

    /// Symbol times of the estimated coefficients, oldest pilot first.
    ///
    /// The current pilot sits at index `K − 1`; earlier pilots are spaced
    /// by `M` before it and the `M − 1` data symbols follow it.
    pub fn block_times(&self) -> Vec<i64> {
        let m = self.m as i64;
        let k = self.k_pilots as i64;
        let mut times: Vec<i64> = (0..k).map(|a| (a - (k - 1)) * m).collect();
        times.extend(1..m);
        times
    }

    /// Index of the current pilot inside the block vector.
    pub fn current_pilot_index(&self) -> usize {
        self.k_pilots - 1
    }

    /// Indices of the data-symbol coefficients inside the block vector.
    pub fn data_indices(&self) -> std::ops::Range<usize> {
        self.k_pilots..self.block_len()
    }
}

/// Two-level power policy and its training/data energy split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyPolicy {
    /// `P̄0 / (B σ_n²)`, linear.
    pub snr_idle: f64,
    /// `P̄1 / (B σ_n²)`, linear.
    pub snr_busy: f64,
    /// Training fraction μ0.
    pub mu_idle: f64,
    /// Training fraction μ1.
    pub mu_busy: f64,
}

impl EnergyPolicy {
    pub fn validate(&self) -> Result<()> {
        check_non_negative("snr_idle", self.snr_idle)?;
        check_non_negative("snr_busy", self.snr_busy)?;
        check_range("mu_idle", self.mu_idle, 0.0, 1.0)?;
        check_range("mu_busy", self.mu_busy, 0.0, 1.0)
    }

    pub fn snr(&self, decision: Decision) -> f64 {
        match decision {
            Decision::Idle => self.snr_idle,
            Decision::Busy => self.snr_busy,
        }
    }

    pub fn mu(&self, decision: Decision) -> f64 {
        match decision {
            Decision::Idle => self.mu_idle,
            Decision::Busy => self.mu_busy,
        }
    }

    pub fn set_mu(&mut self, decision: Decision, mu: f64) {
        match decision {
            Decision::Idle => self.mu_idle = mu,
            Decision::Busy => self.mu_busy = mu,
        }
    }

    /// Average energy of one `M`-symbol block, `M P̄_j / B`.
    pub fn block_energy(&self, frame: &FramePlan, noise: &NoiseParams, decision: Decision) -> f64 {
        frame.m as f64 * self.snr(decision) * noise.sigma_n2
    }
}

/// Everything needed to simulate one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub fading: FadingParams,
    pub noise: NoiseParams,
    pub sensing: SensingModel,
    pub frame: FramePlan,
    pub energy: EnergyPolicy,
}

impl Default for Scenario {
    /// The reference operating point used throughout the numerical study:
    /// α = 0.95, unit fading/noise/interference powers, P_d = 0.9,
    /// P_f = 0.2, Pr{H1} = 0.2, M = 10, one pilot, and a power policy giving
    /// pilot energies 10 (idle) and 1 (busy).
    fn default() -> Self {
        Scenario {
            fading: FadingParams { alpha: 0.95, sigma_r2: 1.0 },
            noise: NoiseParams { sigma_n2: 1.0, sigma_s2: 1.0 },
            sensing: SensingModel { p_d: 0.9, p_f: 0.2, prior_busy: 0.2 },
            frame: FramePlan { m: 10, l_blocks: 10, k_pilots: 1 },
            energy: EnergyPolicy { snr_idle: 10.0, snr_busy: 1.0, mu_idle: 0.1, mu_busy: 0.1 },
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.fading.validate()?;
        self.noise.validate()?;
        self.sensing.validate()?;
        self.frame.validate()?;
        self.energy.validate()
    }

    pub fn pilot_energy(&self, decision: Decision) -> f64 {
        pilot_energy(&self.energy, &self.frame, &self.noise, decision)
    }

    pub fn data_energy(&self, decision: Decision) -> f64 {
        data_energy(&self.energy, &self.frame, &self.noise, decision)
    }

    /// Pr{H1 | Ĥj}, or an error if the decision is impossible.
    pub fn posterior_busy(&self, decision: Decision) -> Result<f64> {
        hypothesis_posterior(&self.sensing, decision).map(|(_, busy)| busy)
    }
}

/// Returns `(Pr{Ĥ0}, Pr{Ĥ1})` by total probability over the true state.
pub fn sensing_marginals(s: &SensingModel) -> (f64, f64) {
    let idle = (1.0 - s.prior_busy) * (1.0 - s.p_f) + s.prior_busy * (1.0 - s.p_d);
    let busy = (1.0 - s.prior_busy) * s.p_f + s.prior_busy * s.p_d;
    (idle, busy)
}

/// Returns `(Pr{H0 | Ĥj}, Pr{H1 | Ĥj})` by Bayes' rule.
pub fn hypothesis_posterior(s: &SensingModel, decision: Decision) -> Result<(f64, f64)> {
    let joint_idle = s.prior(Hypothesis::Idle) * s.decision_likelihood(decision, Hypothesis::Idle);
    let joint_busy = s.prior(Hypothesis::Busy) * s.decision_likelihood(decision, Hypothesis::Busy);
    let marginal = joint_idle + joint_busy;
    if marginal <= 0.0 {
        return Err(Error::DegenerateDecision(decision));
    }
    let busy = joint_busy / marginal;
    Ok((1.0 - busy, busy))
}

/// Additive disturbance variance under the true state.
pub fn noise_variance(n: &NoiseParams, truth: Hypothesis) -> f64 {
    match truth {
        Hypothesis::Idle => n.sigma_n2,
        Hypothesis::Busy => n.sigma_n2 + n.sigma_s2,
    }
}

/// Pilot energy `E_t,j = μ_j M P̄_j / B`.
pub fn pilot_energy(e: &EnergyPolicy, f: &FramePlan, n: &NoiseParams, decision: Decision) -> f64 {
    e.mu(decision) * e.block_energy(f, n, decision)
}

/// Energy per data symbol `E_d,j = (1 − μ_j) M P̄_j / (B (M − 1))`.
pub fn data_energy(e: &EnergyPolicy, f: &FramePlan, n: &NoiseParams, decision: Decision) -> f64 {
    (1.0 - e.mu(decision)) * e.block_energy(f, n, decision) / (f.m as f64 - 1.0)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if !(lo..=hi).contains(&value) {
        return Err(Error::invalid(name, value, "out of range"));
    }
    Ok(())
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::invalid(name, value, "must be positive"));
    }
    Ok(())
}

fn check_non_negative(name: &'static str, value: f64) -> Result<()> {
    if !(value >= 0.0 && value.is_finite()) {
        return Err(Error::invalid(name, value, "must be non-negative"));
    }
    Ok(())
}
