//! Pilot-assisted estimation of a block of correlated fading coefficients
//! when the pilot disturbance is a two-component Gaussian mixture (the true
//! primary-user state is only known through an imperfect sensing decision).
//!
//! Two estimators are provided:
//!
//! * **MMSE**: the conditional mean, a data-dependent mix of the two
//!   per-hypothesis linear estimators with Bayes weights
//!   `Pr{Hi | Ĥj, Y}` computed in the log domain.
//! * **L-MMSE**: the best linear estimator, which replaces the mixture by its
//!   second-order statistics, i.e. an effective noise variance
//!   `σ_n² + Pr{H1 | Ĥj} σ_s²`. Its error covariance is available in closed
//!   form.
//!
//! All linear systems are solved through Cholesky factorizations of the
//! Hermitian positive-definite observation covariance.

mod estimator;
mod linear;
mod mse;
mod pilot;

use serde::{Deserialize, Serialize};

use crate::linalg::CVector;
use crate::model::Decision;

pub use estimator::{estimate_lmmse, estimate_mmse, BlockEstimator};
pub use linear::{
    conditional_linear_estimator, effective_noise_variance, linear_error_covariance, lmmse_error_covariance,
    lmmse_gain, observation_covariance, ErrorCovariance,
};
pub use mse::{analytic_lmmse_mse, monte_carlo_mse, AnalyticMse, MseExperiment, MseReport, TrialOutcome};
pub use pilot::{build_pilot_matrix, simulate_block, PilotMatrix, SimulatedBlock, TrainingObservation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorKind {
    Mmse,
    Lmmse,
}

impl EstimatorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimatorKind::Mmse => "mmse",
            EstimatorKind::Lmmse => "lmmse",
        }
    }
}

/// Estimated block `r̂` with the per-coefficient L-MMSE error variances.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelEstimate {
    pub r_hat: CVector,
    pub err_var: Vec<f64>,
    pub decision: Decision,
}
