//! First-order Gauss-Markov (AR(1)) Rayleigh fading.
//!
//! The process is `r_k = α r_{k−1} + ζ_k` with circular complex Gaussian
//! innovations of variance `(1 − α²) σ_r²`, giving the autocorrelation
//! `R_r(n) = α^n σ_r²`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::model::FadingParams;
use crate::stream::complex_normal;

/// A fading realization indexed by symbol time, starting at time 0.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingTrajectory {
    pub samples: Vec<Complex64>,
}

impl FadingTrajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Covariance of the fading coefficients at a set of symbol times.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    pub entries: DMatrix<Complex64>,
    pub times: Vec<i64>,
}

impl CovarianceMatrix {
    pub fn dim(&self) -> usize {
        self.times.len()
    }
}

/// `R_r(lag) = α^lag σ_r²`.
pub fn autocorrelation(p: &FadingParams, lag: u64) -> f64 {
    let lag = i32::try_from(lag).unwrap_or(i32::MAX);
    p.alpha.powi(lag) * p.sigma_r2
}

/// Draws `length` samples, starting from the stationary distribution.
pub fn generate_trajectory<R: Rng + ?Sized>(p: &FadingParams, length: usize, rng: &mut R) -> FadingTrajectory {
    let mut samples = Vec::with_capacity(length);
    if length == 0 {
        return FadingTrajectory { samples };
    }
    let innovation = p.innovation_variance();
    let mut r = complex_normal(rng, p.sigma_r2);
    samples.push(r);
    for _ in 1..length {
        r = r * p.alpha + complex_normal(rng, innovation);
        samples.push(r);
    }
    FadingTrajectory { samples }
}

/// Entry `(a, b)` is `σ_r² α^{|t_a − t_b|}`; built symmetrically so the
/// result is exactly Hermitian.
pub fn block_covariance(p: &FadingParams, times: &[i64]) -> CovarianceMatrix {
    let n = times.len();
    let mut entries = DMatrix::<Complex64>::zeros(n, n);
    for a in 0..n {
        entries[(a, a)] = Complex64::new(p.sigma_r2, 0.0);
        for b in (a + 1)..n {
            let v = Complex64::new(autocorrelation(p, times[a].abs_diff(times[b])), 0.0);
            entries[(a, b)] = v;
            entries[(b, a)] = v;
        }
    }
    CovarianceMatrix { entries, times: times.to_vec() }
}
