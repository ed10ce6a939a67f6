//! Achievable data rates with estimated channel state.
//!
//! A block rate averages, over sensing decisions, frames and data
//! positions, the mutual information between a data symbol and its
//! received sample given the channel estimate. Two inputs are supported:
//! BPSK, whose information is estimated by Monte Carlo under the exact
//! mixture likelihood, and circular Gaussian, for which the closed-form
//! worst-case-noise bound is used (a direct quadrature-based estimate is
//! available for validating the bound).

mod block;
mod gaussian;
mod likelihood;
mod quadrature;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use block::{block_rate, decision_term, gaussian_mixture_block_rate, RatePoint, RateSettings};
pub use gaussian::{bessel_i0e, gaussian_input_mutual_information, gaussian_output_density, gaussian_rate_bound};
pub use likelihood::{bpsk_mutual_information, constellation_mutual_information, mixture_likelihood, EstimatedChannel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputKind {
    Bpsk,
    Gaussian,
}

impl InputKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InputKind::Bpsk => "bpsk",
            InputKind::Gaussian => "gaussian",
        }
    }
}

/// A finite input alphabet with symbol probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    pub points: Vec<Complex64>,
    pub priors: Vec<f64>,
    cumulative: Vec<f64>,
}

impl Constellation {
    pub fn new(points: Vec<Complex64>, priors: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != priors.len() {
            return Err(Error::invalid("constellation", points.len() as f64, "needs one prior per point"));
        }
        if priors.iter().any(|p| p.is_nan() || *p <= 0.0) {
            return Err(Error::invalid("constellation prior", f64::NAN, "priors must be positive"));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::invalid("constellation prior sum", total, "priors must sum to 1"));
        }
        let mut acc = 0.0;
        let cumulative = priors
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(Constellation { points, priors, cumulative })
    }

    /// Equiprobable `±√E`.
    pub fn bpsk(energy: f64) -> Self {
        let a = energy.sqrt();
        Constellation {
            points: vec![Complex64::new(a, 0.0), Complex64::new(-a, 0.0)],
            priors: vec![0.5, 0.5],
            cumulative: vec![0.5, 1.0],
        }
    }

    pub fn average_energy(&self) -> f64 {
        self.points.iter().zip(&self.priors).map(|(x, p)| p * x.norm_sqr()).sum()
    }

    /// Input entropy in bits, the ceiling on the mutual information.
    pub fn max_bits(&self) -> f64 {
        -self.priors.iter().map(|p| p * p.log2()).sum::<f64>()
    }

    /// Index of the symbol selected by a uniform draw `u ∈ [0, 1)`.
    pub fn pick(&self, u: f64) -> usize {
        self.cumulative.iter().position(|&c| u < c).unwrap_or(self.points.len() - 1)
    }
}
