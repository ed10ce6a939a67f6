use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fading::{block_covariance, CovarianceMatrix};
use crate::linalg::{inverse_and_logdet, quadratic_form, CMatrix, CVector};
use crate::model::{noise_variance, Decision, Hypothesis, Scenario};

use super::linear::{conditional_linear_estimator, error_covariance_for_gain, lmmse_gain, ErrorCovariance};
use super::pilot::{build_pilot_matrix, PilotMatrix, TrainingObservation};
use super::{ChannelEstimate, EstimatorKind};

/// Estimator matrices for one scenario and sensing decision, built once and
/// shared read-only across trials.
#[derive(Debug, Clone)]
pub struct BlockEstimator {
    decision: Decision,
    posterior_busy: f64,
    cov: CovarianceMatrix,
    pilot: PilotMatrix,
    lmmse_gain: CMatrix,
    /// Per-hypothesis conditional-mean coefficients `A_i`.
    hypothesis_gain: [CMatrix; 2],
    /// `(Q Λ Q† + σ_w,i² I)⁻¹` and its log-determinant.
    precision: [CMatrix; 2],
    log_det: [f64; 2],
    error: ErrorCovariance,
    /// The disturbance given the decision is a single Gaussian.
    collapsed: bool,
}

impl BlockEstimator {
    pub fn new(scenario: &Scenario, decision: Decision) -> Result<Self> {
        scenario.validate()?;
        let cov = block_covariance(&scenario.fading, &scenario.frame.block_times());
        Self::from_parts(scenario, decision, cov, scenario.pilot_energy(decision))
    }

    pub fn from_parts(
        scenario: &Scenario,
        decision: Decision,
        cov: CovarianceMatrix,
        pilot_energy: f64,
    ) -> Result<Self> {
        if cov.dim() != scenario.frame.block_len() {
            return Err(Error::Dimension(format!(
                "covariance is {}x{}, frame block has {} coefficients",
                cov.dim(),
                cov.dim(),
                scenario.frame.block_len()
            )));
        }
        let posterior_busy = scenario.posterior_busy(decision)?;
        let pilot = build_pilot_matrix(&scenario.frame, pilot_energy);
        let lmmse_gain = lmmse_gain(scenario, &cov, &pilot, posterior_busy)?;

        let mut hypothesis_gain = [CMatrix::zeros(0, 0), CMatrix::zeros(0, 0)];
        let mut precision = [CMatrix::zeros(0, 0), CMatrix::zeros(0, 0)];
        let mut log_det = [0.0; 2];
        for h in Hypothesis::ALL {
            let sigma_w2 = noise_variance(&scenario.noise, h);
            hypothesis_gain[h.index()] = conditional_linear_estimator(&cov, &pilot, sigma_w2)?;
            let (p, ld) = inverse_and_logdet(
                super::linear::observation_covariance(&cov, &pilot, sigma_w2),
                "observation covariance",
            )?;
            precision[h.index()] = p;
            log_det[h.index()] = ld;
        }

        let error = error_covariance_for_gain(scenario, &cov, &pilot, &lmmse_gain, posterior_busy);
        let collapsed = scenario.noise.sigma_s2 == 0.0 || posterior_busy == 0.0 || posterior_busy == 1.0;
        Ok(BlockEstimator {
            decision,
            posterior_busy,
            cov,
            pilot,
            lmmse_gain,
            hypothesis_gain,
            precision,
            log_det,
            error,
            collapsed,
        })
    }

    pub fn decision(&self) -> Decision {
        self.decision
    }

    pub fn posterior_busy(&self) -> f64 {
        self.posterior_busy
    }

    pub fn covariance(&self) -> &CovarianceMatrix {
        &self.cov
    }

    pub fn pilot_matrix(&self) -> &PilotMatrix {
        &self.pilot
    }

    /// The L-MMSE coefficient matrix `Λ_{l,j}`.
    pub fn lmmse_matrix(&self) -> &CMatrix {
        &self.lmmse_gain
    }

    pub fn hypothesis_matrix(&self, h: Hypothesis) -> &CMatrix {
        &self.hypothesis_gain[h.index()]
    }

    pub fn error_covariance(&self) -> &ErrorCovariance {
        &self.error
    }

    /// Analytic L-MMSE error variance of each coefficient in the block.
    pub fn error_variances(&self) -> &[f64] {
        &self.error.per_symbol
    }

    pub fn lmmse(&self, y: &CVector) -> CVector {
        &self.lmmse_gain * y
    }

    /// `Pr{H1 | Ĥj, Y}` via log-domain Bayes weights.
    pub fn busy_weight(&self, y: &CVector) -> f64 {
        if self.collapsed {
            return self.posterior_busy;
        }
        let k = y.len() as f64;
        let log_density = |h: Hypothesis| {
            let i = h.index();
            -k * PI.ln() - self.log_det[i] - quadratic_form(&self.precision[i], y)
        };
        let prior_idle = 1.0 - self.posterior_busy;
        let log_idle = prior_idle.ln() + log_density(Hypothesis::Idle);
        let log_busy = self.posterior_busy.ln() + log_density(Hypothesis::Busy);
        // logistic(log_busy − log_idle), stable in both tails
        let d = log_busy - log_idle;
        if d >= 0.0 {
            1.0 / (1.0 + (-d).exp())
        } else {
            let e = d.exp();
            e / (1.0 + e)
        }
    }

    pub fn mmse(&self, y: &CVector) -> CVector {
        if self.collapsed {
            return self.lmmse(y);
        }
        let w_busy = self.busy_weight(y);
        let idle = &self.hypothesis_gain[0] * y;
        let busy = &self.hypothesis_gain[1] * y;
        idle * num_complex::Complex64::new(1.0 - w_busy, 0.0) + busy * num_complex::Complex64::new(w_busy, 0.0)
    }

    pub fn estimate_vector(&self, kind: EstimatorKind, y: &CVector) -> CVector {
        match kind {
            EstimatorKind::Lmmse => self.lmmse(y),
            EstimatorKind::Mmse => self.mmse(y),
        }
    }

    pub fn estimate(&self, kind: EstimatorKind, obs: &TrainingObservation) -> Result<ChannelEstimate> {
        if obs.y.len() != self.pilot.entries.nrows() {
            return Err(Error::Dimension(format!(
                "observation has {} pilots, estimator expects {}",
                obs.y.len(),
                self.pilot.entries.nrows()
            )));
        }
        Ok(ChannelEstimate {
            r_hat: self.estimate_vector(kind, &obs.y),
            err_var: self.error.per_symbol.clone(),
            decision: self.decision,
        })
    }
}

/// L-MMSE estimate of the block from one training observation.
pub fn estimate_lmmse(
    obs: &TrainingObservation,
    scenario: &Scenario,
    cov: &CovarianceMatrix,
) -> Result<ChannelEstimate> {
    BlockEstimator::from_parts(scenario, obs.decision, cov.clone(), obs.pilot_energy)?
        .estimate(EstimatorKind::Lmmse, obs)
}

/// MMSE (conditional-mean) estimate. The reported `err_var` is the analytic
/// L-MMSE variance; the MMSE error itself is only available by simulation.
pub fn estimate_mmse(
    obs: &TrainingObservation,
    scenario: &Scenario,
    cov: &CovarianceMatrix,
) -> Result<ChannelEstimate> {
    BlockEstimator::from_parts(scenario, obs.decision, cov.clone(), obs.pilot_energy)?
        .estimate(EstimatorKind::Mmse, obs)
}
