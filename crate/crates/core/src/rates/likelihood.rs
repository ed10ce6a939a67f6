use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rand::Rng;

use crate::model::{noise_variance, Hypothesis, NoiseParams};
use crate::stats::{Accumulator, MeanEstimate};
use crate::stream::complex_normal;

use super::Constellation;

/// What the receiver knows about one data symbol's channel: the estimate,
/// its error variance, and the sensing-decision posterior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatedChannel {
    pub r_hat: Complex64,
    pub err_var: f64,
    /// `Pr{H1 | Ĥj}`.
    pub posterior_busy: f64,
    pub noise: NoiseParams,
}

impl EstimatedChannel {
    /// Component variance `σ_w,i² + σ²_r̃ |x|²`.
    pub fn component_variance(&self, h: Hypothesis, symbol_energy: f64) -> f64 {
        noise_variance(&self.noise, h) + self.err_var * symbol_energy
    }

    fn weights(&self) -> [f64; 2] {
        [1.0 - self.posterior_busy, self.posterior_busy]
    }
}

/// `f(y | x, r̂, Ĥj) = Σ_i Pr{Hi|Ĥj} (1/(π σ_i²)) exp(−|y − r̂x|² / σ_i²)`.
pub fn mixture_likelihood(
    y: Complex64,
    x: Complex64,
    r_hat: Complex64,
    err_var: f64,
    posterior: (f64, f64),
    n: &NoiseParams,
) -> f64 {
    let d = (y - r_hat * x).norm_sqr();
    let e = x.norm_sqr();
    let (w_idle, w_busy) = posterior;
    let v0 = n.sigma_n2 + err_var * e;
    let v1 = n.sigma_n2 + n.sigma_s2 + err_var * e;
    w_idle / (PI * v0) * (-d / v0).exp() + w_busy / (PI * v1) * (-d / v1).exp()
}

/// Per-symbol log-density pieces `ln w_i − ln σ_i²` (the common `−ln π`
/// is dropped) with the matching inverse variances.
#[derive(Debug, Clone, Copy)]
struct MixtureTerms {
    offset: [f64; 2],
    inv_var: [f64; 2],
}

impl MixtureTerms {
    fn new(ch: &EstimatedChannel, symbol_energy: f64) -> Self {
        let w = ch.weights();
        let mut offset = [f64::NEG_INFINITY; 2];
        let mut inv_var = [0.0; 2];
        for h in Hypothesis::ALL {
            let i = h.index();
            let v = ch.component_variance(h, symbol_energy);
            inv_var[i] = 1.0 / v;
            if w[i] > 0.0 {
                offset[i] = w[i].ln() - v.ln();
            }
        }
        MixtureTerms { offset, inv_var }
    }

    #[inline]
    fn log_density(&self, dist2: f64) -> f64 {
        log_add_exp(self.offset[0] - dist2 * self.inv_var[0], self.offset[1] - dist2 * self.inv_var[1])
    }
}

#[inline]
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Monte Carlo estimate of `I(x; y | r̂, Ĥj)` in bits for a finite
/// constellation under the mixture likelihood.
///
/// Outputs are drawn from the component of `true_state`; the receiver
/// scores them with the two-component mixture. Each sample consumes one
/// uniform (symbol choice) and one complex normal, so estimates at nearby
/// parameters share their randomness.
pub fn constellation_mutual_information<R: Rng + ?Sized>(
    constellation: &Constellation,
    ch: &EstimatedChannel,
    true_state: Hypothesis,
    samples: usize,
    rng: &mut R,
) -> MeanEstimate {
    let u_count = constellation.points.len();
    let terms: Vec<MixtureTerms> = constellation.points.iter().map(|x| MixtureTerms::new(ch, x.norm_sqr())).collect();
    let log_prior: Vec<f64> = constellation.priors.iter().map(|p| p.ln()).collect();
    let means: Vec<Complex64> = constellation.points.iter().map(|x| ch.r_hat * x).collect();
    let true_var: Vec<f64> =
        constellation.points.iter().map(|x| ch.component_variance(true_state, x.norm_sqr())).collect();

    let mut acc = Accumulator::new();
    let mut logs = vec![0.0; u_count];
    for _ in 0..samples.max(1) {
        let u = constellation.pick(rng.random::<f64>());
        let y = means[u] + complex_normal(rng, true_var[u]);
        let mut log_marginal = f64::NEG_INFINITY;
        for (v, slot) in logs.iter_mut().enumerate() {
            *slot = terms[v].log_density((y - means[v]).norm_sqr());
            log_marginal = log_add_exp(log_marginal, log_prior[v] + *slot);
        }
        acc.push((logs[u] - log_marginal) / LN_2);
    }
    let mut est = acc.estimate().expect("at least one sample");
    est.mean = est.mean.clamp(0.0, constellation.max_bits());
    est
}

/// Equiprobable BPSK at energy `e_d`; see [`constellation_mutual_information`].
pub fn bpsk_mutual_information<R: Rng + ?Sized>(
    ch: &EstimatedChannel,
    e_d: f64,
    true_state: Hypothesis,
    samples: usize,
    rng: &mut R,
) -> MeanEstimate {
    if e_d <= 0.0 || ch.r_hat.norm_sqr() == 0.0 {
        return MeanEstimate::exact(0.0);
    }
    constellation_mutual_information(&Constellation::bpsk(e_d), ch, true_state, samples, rng)
}
