use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::{simulate_block, BlockEstimator, EstimatorKind};
use crate::exec::Executor;
use crate::model::{Decision, Scenario};
use crate::sensing::draw_true_state;
use crate::stats::{Accumulator, MeanEstimate};
use crate::stream::{Purpose, StreamKey};

use super::gaussian::{gaussian_input_mutual_information, gaussian_rate_bound};
use super::likelihood::{bpsk_mutual_information, EstimatedChannel};
use super::InputKind;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSettings {
    /// Frames (fading and pilot-noise draws) per sensing decision.
    pub outer_trials: usize,
    /// Output samples per data symbol for Monte Carlo mutual information.
    pub inner_samples: usize,
    /// Estimator producing `r̂`; error variances always come from L-MMSE.
    pub estimator: EstimatorKind,
}

impl Default for RateSettings {
    fn default() -> Self {
        RateSettings { outer_trials: 2000, inner_samples: 200, estimator: EstimatorKind::Lmmse }
    }
}

impl RateSettings {
    pub fn validate(&self) -> Result<()> {
        if self.outer_trials == 0 {
            return Err(Error::invalid("outer_trials", 0.0, "must be positive"));
        }
        if self.inner_samples == 0 {
            return Err(Error::invalid("inner_samples", 0.0, "must be positive"));
        }
        Ok(())
    }
}

/// Average rate per symbol of a block, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub rate: f64,
    pub std_error: f64,
    pub m: usize,
    pub mu_idle: f64,
    pub mu_busy: f64,
    /// `(1/M) Σ_k E{I_k | Ĥj}` for each decision, unweighted.
    pub per_decision: [MeanEstimate; 2],
}

impl RatePoint {
    /// Combines independent per-decision terms with weights `Pr{Ĥj}`.
    pub fn assemble(scenario: &Scenario, per_decision: [MeanEstimate; 2]) -> Self {
        let mut rate = 0.0;
        let mut var = 0.0;
        for d in Decision::ALL {
            let p = scenario.sensing.decision_probability(d);
            let t = per_decision[d.index()];
            rate += p * t.mean;
            var += (p * t.std_error).powi(2);
        }
        RatePoint {
            rate: rate.max(0.0),
            std_error: var.sqrt(),
            m: scenario.frame.m,
            mu_idle: scenario.energy.mu_idle,
            mu_busy: scenario.energy.mu_busy,
            per_decision,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Metric {
    Bound,
    Bpsk,
    GaussianDirect,
}

impl From<InputKind> for Metric {
    fn from(input: InputKind) -> Self {
        match input {
            InputKind::Bpsk => Metric::Bpsk,
            InputKind::Gaussian => Metric::Bound,
        }
    }
}

/// `T_j = (1/M) Σ_k E{I_k | Ĥj}`, the decision-`j` contribution before
/// weighting by `Pr{Ĥj}`. Exactly zero when the decision is impossible or
/// carries no data energy.
///
/// Frame `t` of decision `j` draws from substream `(seed, j, t)` and the
/// inner samples of data position `k` from `(seed, j, t, k)`. Neither
/// depends on `M` or μ, so terms at different grid points share their
/// randomness.
pub fn decision_term<E: Executor>(
    scenario: &Scenario,
    decision: Decision,
    input: InputKind,
    settings: &RateSettings,
    seed: u64,
    exec: &E,
) -> Result<MeanEstimate> {
    term(scenario, decision, input.into(), settings, seed, exec)
}

fn term<E: Executor>(
    scenario: &Scenario,
    decision: Decision,
    metric: Metric,
    settings: &RateSettings,
    seed: u64,
    exec: &E,
) -> Result<MeanEstimate> {
    settings.validate()?;
    scenario.validate()?;
    let e_d = scenario.data_energy(decision);
    if scenario.sensing.decision_probability(decision) == 0.0 || e_d <= 0.0 {
        return Ok(MeanEstimate::exact(0.0));
    }
    let est = BlockEstimator::new(scenario, decision)?;
    let posterior = est.posterior_busy();
    let pilot_energy = est.pilot_matrix().pilot_energy;
    let outer = StreamKey::new(seed, Purpose::RateOuter);
    let inner = StreamKey::new(
        seed,
        match metric {
            Metric::GaussianDirect => Purpose::GaussianDirect,
            _ => Purpose::RateInner,
        },
    );
    let j = decision.index() as u64;
    let frame = scenario.frame;
    let err_var = est.error_variances();

    let values = exec.map(settings.outer_trials, |t| {
        let t = t as u64;
        let mut rng = outer.rng(&[j, t]);
        let truth = draw_true_state(posterior, &mut rng);
        let block = simulate_block(scenario, decision, truth, pilot_energy, &mut rng);
        let r_hat = est.estimate_vector(settings.estimator, &block.observation.y);
        let mut sum = 0.0;
        for idx in frame.data_indices() {
            let k = (idx + 1 - frame.k_pilots) as u64;
            let ch = EstimatedChannel {
                r_hat: r_hat[idx],
                err_var: err_var[idx],
                posterior_busy: posterior,
                noise: scenario.noise,
            };
            sum += match metric {
                Metric::Bound => gaussian_rate_bound(&ch, e_d),
                Metric::Bpsk => {
                    bpsk_mutual_information(&ch, e_d, truth, settings.inner_samples, &mut inner.rng(&[j, t, k])).mean
                }
                Metric::GaussianDirect => {
                    gaussian_input_mutual_information(&ch, e_d, settings.inner_samples, &mut inner.rng(&[j, t, k])).mean
                }
            };
        }
        sum / frame.m as f64
    });
    let mut acc = Accumulator::new();
    values.into_iter().for_each(|v| acc.push(v));
    Ok(acc.estimate().expect("outer_trials is positive"))
}

/// Average rate `Σ_j Pr{Ĥj} T_j` of the block described by `scenario`.
pub fn block_rate<E: Executor>(
    scenario: &Scenario,
    input: InputKind,
    settings: &RateSettings,
    seed: u64,
    exec: &E,
) -> Result<RatePoint> {
    assemble(scenario, input.into(), settings, seed, exec)
}

/// Block rate for Gaussian inputs computed from the exact mixture mutual
/// information instead of the worst-case-noise bound. It shares the frame
/// draws of [`block_rate`] under the same seed.
pub fn gaussian_mixture_block_rate<E: Executor>(
    scenario: &Scenario,
    settings: &RateSettings,
    seed: u64,
    exec: &E,
) -> Result<RatePoint> {
    assemble(scenario, Metric::GaussianDirect, settings, seed, exec)
}

fn assemble<E: Executor>(
    scenario: &Scenario,
    metric: Metric,
    settings: &RateSettings,
    seed: u64,
    exec: &E,
) -> Result<RatePoint> {
    let idle = term(scenario, Decision::Idle, metric, settings, seed, exec)?;
    let busy = term(scenario, Decision::Busy, metric, settings, seed, exec)?;
    Ok(RatePoint::assemble(scenario, [idle, busy]))
}
