use std::f64::consts::{LN_2, PI};

use rand::Rng;

use crate::model::Hypothesis;
use crate::sensing::draw_true_state;
use crate::stats::{Accumulator, MeanEstimate};
use crate::stream::complex_normal;

use super::likelihood::{log_add_exp, EstimatedChannel};
use super::quadrature::integrate;

/// Lower bound on the per-symbol rate with Gaussian inputs, in bits:
/// the mixture disturbance and the estimation error are replaced by
/// independent Gaussian noise of the same power,
/// `log2(1 + |r̂|² E_d / (σ²_r̃ E_d + σ_n² + Pr{H1|Ĥj} σ_s²))`.
pub fn gaussian_rate_bound(ch: &EstimatedChannel, e_d: f64) -> f64 {
    if e_d <= 0.0 {
        return 0.0;
    }
    let noise = ch.err_var * e_d + ch.noise.sigma_n2 + ch.posterior_busy * ch.noise.sigma_s2;
    (ch.r_hat.norm_sqr() * e_d / noise).ln_1p() / LN_2
}

/// Exponentially scaled modified Bessel function `e^{−x} I₀(x)` for `x ≥ 0`.
pub fn bessel_i0e(x: f64) -> f64 {
    let x = x.abs();
    if x <= 20.0 {
        // Σ (x²/4)^k / (k!)², all terms positive.
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        while term > sum * 1e-17 {
            term *= q / (k * k);
            sum += term;
            k += 1.0;
        }
        sum * (-x).exp()
    } else {
        // Asymptotic series; terms shrink until k ≈ 4x, far past convergence.
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            let ratio = (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
            term *= ratio;
            sum += term;
            if term < sum * 1e-17 || ratio >= 1.0 {
                break;
            }
            k += 1.0;
        }
        sum / (2.0 * PI * x).sqrt()
    }
}

/// Marginal density `f(y | r̂, Ĥj)` for a circular Gaussian input of energy
/// `e_d`, as a function of `|y|` only.
///
/// The phase of `x` integrates to a Bessel function, which leaves a 1-D
/// integral over `ρ = |x|`.
pub fn gaussian_output_density(y_abs: f64, ch: &EstimatedChannel, e_d: f64) -> f64 {
    let b = ch.r_hat.norm();
    let w = [1.0 - ch.posterior_busy, ch.posterior_busy];
    let base = [ch.noise.sigma_n2, ch.noise.sigma_n2 + ch.noise.sigma_s2];
    let integrand = |rho: f64| {
        let prior = 2.0 * rho / e_d * (-rho * rho / e_d).exp();
        if prior == 0.0 {
            return 0.0;
        }
        let mut f = 0.0;
        for i in 0..2 {
            if w[i] == 0.0 {
                continue;
            }
            let v = base[i] + ch.err_var * rho * rho;
            let d = y_abs - b * rho;
            f += w[i] / (PI * v) * (-d * d / v).exp() * bessel_i0e(2.0 * y_abs * b * rho / v);
        }
        prior * f
    };

    let scale = e_d.sqrt();
    let rho_max = scale * 50f64.sqrt();
    let mut points: Vec<f64> = [0.0, 0.25, 0.5, 1.0, 2.0, 4.0].iter().map(|c| c * scale).collect();
    points.push(rho_max);
    if b > 0.0 {
        let peak = y_abs / b;
        if peak < rho_max {
            let width = (ch.noise.sigma_n2 + ch.err_var * peak * peak).sqrt() / b;
            for c in [-8.0, -2.0, 0.0, 2.0, 8.0] {
                points.push((peak + c * width).clamp(0.0, rho_max));
            }
        }
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    integrate(&integrand, &points, 1e-10, 1e-300)
}

/// Monte Carlo estimate of `I(x; y | r̂, Ĥj)` in bits for a circular
/// Gaussian input under the exact mixture disturbance.
///
/// Each sample draws `x`, the disturbance component from the decision
/// posterior, and the noise; `f(y)` is evaluated by quadrature.
pub fn gaussian_input_mutual_information<R: Rng + ?Sized>(
    ch: &EstimatedChannel,
    e_d: f64,
    samples: usize,
    rng: &mut R,
) -> MeanEstimate {
    if e_d <= 0.0 || ch.r_hat.norm_sqr() == 0.0 {
        return MeanEstimate::exact(0.0);
    }
    let w = [1.0 - ch.posterior_busy, ch.posterior_busy];
    let mut acc = Accumulator::new();
    for _ in 0..samples.max(1) {
        let x = complex_normal(rng, e_d);
        let h = draw_true_state(ch.posterior_busy, rng);
        let energy = x.norm_sqr();
        let y = ch.r_hat * x + complex_normal(rng, ch.component_variance(h, energy));
        let d = (y - ch.r_hat * x).norm_sqr();
        let mut log_cond = f64::NEG_INFINITY;
        for g in Hypothesis::ALL {
            let i = g.index();
            if w[i] > 0.0 {
                let v = ch.component_variance(g, energy);
                log_cond = log_add_exp(log_cond, w[i].ln() - (PI * v).ln() - d / v);
            }
        }
        let log_marginal = gaussian_output_density(y.norm(), ch, e_d).ln();
        acc.push((log_cond - log_marginal) / LN_2);
    }
    let mut est = acc.estimate().expect("at least one sample");
    est.mean = est.mean.max(0.0);
    est
}
