use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exec::Executor;
use crate::linalg::CVector;
use crate::model::{Decision, Scenario};
use crate::sensing::{draw_frame_state, FrameState};
use crate::stats::{Accumulator, MeanEstimate};
use crate::stream::{Purpose, StreamKey};

use super::estimator::BlockEstimator;
use super::pilot::{simulate_block, SimulatedBlock};
use super::EstimatorKind;

/// Per-coefficient mean squared error, overall and conditioned on the
/// sensing decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MseReport {
    pub overall: MeanEstimate,
    /// `None` when no trial produced that decision.
    pub per_decision: [Option<MeanEstimate>; 2],
}

impl MseReport {
    pub fn given(&self, decision: Decision) -> Option<MeanEstimate> {
        self.per_decision[decision.index()]
    }
}

/// Analytic L-MMSE MSE per coefficient, assembled over decisions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticMse {
    pub total: f64,
    pub per_decision: [Option<f64>; 2],
}

/// One Monte Carlo trial, kept whole for residual checks.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub state: FrameState,
    pub block: SimulatedBlock,
    pub r_hat: CVector,
}

impl TrialOutcome {
    /// `‖r − r̂‖² / n`.
    pub fn squared_error(&self) -> f64 {
        let n = self.r_hat.len() as f64;
        (&self.block.truth - &self.r_hat).norm_squared() / n
    }
}

/// A scenario with its estimators precomputed for both decisions.
#[derive(Debug, Clone)]
pub struct MseExperiment {
    scenario: Scenario,
    estimators: [Option<BlockEstimator>; 2],
    key: StreamKey,
}

impl MseExperiment {
    pub fn new(scenario: &Scenario, seed: u64) -> Result<Self> {
        scenario.validate()?;
        let mut estimators = [None, None];
        for d in Decision::ALL {
            if scenario.sensing.decision_probability(d) > 0.0 {
                estimators[d.index()] = Some(BlockEstimator::new(scenario, d)?);
            }
        }
        Ok(MseExperiment { scenario: *scenario, estimators, key: StreamKey::new(seed, Purpose::Mse) })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn estimator(&self, decision: Decision) -> Option<&BlockEstimator> {
        self.estimators[decision.index()].as_ref()
    }

    /// Trial `index` is a pure function of `(seed, index)`; both estimator
    /// kinds see identical draws.
    pub fn trial(&self, kind: EstimatorKind, index: u64) -> TrialOutcome {
        let mut rng = self.key.rng(&[index]);
        let state = draw_frame_state(&self.scenario.sensing, &mut rng);
        let est = self.estimators[state.decision.index()].as_ref().expect("a drawn decision has positive probability");
        let pilot_energy = est.pilot_matrix().pilot_energy;
        let block = simulate_block(&self.scenario, state.decision, state.true_state, pilot_energy, &mut rng);
        let r_hat = est.estimate_vector(kind, &block.observation.y);
        TrialOutcome { state, block, r_hat }
    }

    pub fn run<E: Executor>(&self, kind: EstimatorKind, trials: usize, exec: &E) -> MseReport {
        let errors = exec.map(trials, |i| {
            let t = self.trial(kind, i as u64);
            (t.state.decision, t.squared_error())
        });
        let mut overall = Accumulator::new();
        let mut per = [Accumulator::new(), Accumulator::new()];
        for (d, e) in errors {
            overall.push(e);
            per[d.index()].push(e);
        }
        MseReport {
            overall: overall.estimate().unwrap_or(MeanEstimate::exact(f64::NAN)),
            per_decision: [per[0].estimate(), per[1].estimate()],
        }
    }

    pub fn analytic_lmmse(&self) -> AnalyticMse {
        let mut per_decision = [None, None];
        let mut total = 0.0;
        for d in Decision::ALL {
            if let Some(est) = self.estimator(d) {
                let mse = est.error_covariance().mean_error();
                per_decision[d.index()] = Some(mse);
                total += self.scenario.sensing.decision_probability(d) * mse;
            }
        }
        AnalyticMse { total, per_decision }
    }
}

/// Empirical per-coefficient MSE of `kind` over `trials` independent frames.
pub fn monte_carlo_mse<E: Executor>(
    scenario: &Scenario,
    kind: EstimatorKind,
    trials: usize,
    seed: u64,
    exec: &E,
) -> Result<MseReport> {
    Ok(MseExperiment::new(scenario, seed)?.run(kind, trials.max(1), exec))
}

/// `Σ_j Σ_i Pr{Hi} Pr{Ĥj|Hi} E{‖r̃_j‖² | Ĥj, Hi} / n` in closed form.
pub fn analytic_lmmse_mse(scenario: &Scenario) -> Result<AnalyticMse> {
    Ok(MseExperiment::new(scenario, 0)?.analytic_lmmse())
}
