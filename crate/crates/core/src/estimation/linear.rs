use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fading::CovarianceMatrix;
use crate::linalg::{right_divide_hpd, CMatrix};
use crate::model::{noise_variance, Decision, Hypothesis, Scenario};

use super::pilot::PilotMatrix;

/// `Q Λ_r Q† + σ² I`.
pub fn observation_covariance(cov: &CovarianceMatrix, q: &PilotMatrix, sigma2: f64) -> CMatrix {
    let k = q.entries.nrows();
    let mut c = &q.entries * &cov.entries * q.entries.adjoint();
    for i in 0..k {
        c[(i, i)] += sigma2;
    }
    // Exact Hermitian symmetry for the Cholesky factorization.
    (&c + c.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Coefficients `A = Λ_r Q† (Q Λ_r Q† + σ_w² I)⁻¹` of the conditional mean
/// `E{r | Y}` under Gaussian disturbance of variance `σ_w²`.
pub fn conditional_linear_estimator(cov: &CovarianceMatrix, q: &PilotMatrix, sigma_w2: f64) -> Result<CMatrix> {
    if q.entries.ncols() != cov.dim() {
        return Err(Error::Dimension(format!(
            "pilot matrix has {} columns, covariance is {}x{}",
            q.entries.ncols(),
            cov.dim(),
            cov.dim()
        )));
    }
    let cross = &cov.entries * q.entries.adjoint();
    right_divide_hpd(&cross, observation_covariance(cov, q, sigma_w2), "observation covariance")
}

/// Error covariance of a linear estimator `r̂ = G Y` when the disturbance
/// variance is `σ²`:
/// `Λ − G Q Λ − (G Q Λ)† + G (Q Λ Q† + σ² I) G†`.
pub fn linear_error_covariance(cov: &CovarianceMatrix, q: &PilotMatrix, gain: &CMatrix, sigma2: f64) -> CMatrix {
    let gql = gain * &q.entries * &cov.entries;
    let c = observation_covariance(cov, q, sigma2);
    let e = &cov.entries - &gql - gql.adjoint() + gain * c * gain.adjoint();
    (&e + e.adjoint()) * Complex64::new(0.5, 0.0)
}

/// L-MMSE error covariances under a sensing decision.
#[derive(Debug, Clone)]
pub struct ErrorCovariance {
    /// `Σ_i Pr{Hi | Ĥj} Λ_err,i`.
    pub mixture: CMatrix,
    /// `Λ_err,i` indexed by true hypothesis.
    pub per_hypothesis: [CMatrix; 2],
    /// Diagonal of `mixture`, clamped to `[0, σ_r²]`.
    pub per_symbol: Vec<f64>,
}

impl ErrorCovariance {
    /// Mean per-coefficient error, `tr(mixture) / n`.
    pub fn mean_error(&self) -> f64 {
        self.per_symbol.iter().sum::<f64>() / self.per_symbol.len() as f64
    }
}

/// Effective disturbance variance seen by the L-MMSE estimator, `σ_n² + Pr{H1|Ĥj} σ_s²`.
pub fn effective_noise_variance(scenario: &Scenario, posterior_busy: f64) -> f64 {
    scenario.noise.sigma_n2 + posterior_busy * scenario.noise.sigma_s2
}

/// L-MMSE gain for decision `j`: `Λ Q† [Σ_i Pr{Hi|Ĥj} (Q Λ Q† + σ_w,i² I)]⁻¹`.
pub fn lmmse_gain(
    scenario: &Scenario,
    cov: &CovarianceMatrix,
    q: &PilotMatrix,
    posterior_busy: f64,
) -> Result<CMatrix> {
    conditional_linear_estimator(cov, q, effective_noise_variance(scenario, posterior_busy))
}

pub fn lmmse_error_covariance(
    scenario: &Scenario,
    cov: &CovarianceMatrix,
    q: &PilotMatrix,
    decision: Decision,
) -> Result<ErrorCovariance> {
    let posterior_busy = scenario.posterior_busy(decision)?;
    let gain = lmmse_gain(scenario, cov, q, posterior_busy)?;
    Ok(error_covariance_for_gain(scenario, cov, q, &gain, posterior_busy))
}

pub(crate) fn error_covariance_for_gain(
    scenario: &Scenario,
    cov: &CovarianceMatrix,
    q: &PilotMatrix,
    gain: &CMatrix,
    posterior_busy: f64,
) -> ErrorCovariance {
    let per_hypothesis =
        Hypothesis::ALL.map(|h| linear_error_covariance(cov, q, gain, noise_variance(&scenario.noise, h)));
    let mixture = &per_hypothesis[0] * Complex64::new(1.0 - posterior_busy, 0.0)
        + &per_hypothesis[1] * Complex64::new(posterior_busy, 0.0);
    let sigma_r2 = scenario.fading.sigma_r2;
    let per_symbol = (0..mixture.nrows()).map(|i| mixture[(i, i)].re.clamp(0.0, sigma_r2)).collect();
    ErrorCovariance { mixture, per_hypothesis, per_symbol }
}
