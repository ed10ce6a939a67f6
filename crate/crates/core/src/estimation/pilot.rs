use num_complex::Complex64;
use rand::Rng;

use crate::fading::generate_trajectory;
use crate::linalg::{CMatrix, CVector};
use crate::model::{noise_variance, Decision, FramePlan, Hypothesis, Scenario};
use crate::stream::complex_normal;

/// Maps the block of fading coefficients to the `K` pilot observations.
///
/// Row `m` corresponds to the observation `m` pilot periods in the past and
/// has its single nonzero `√E_t` in column `K − 1 − m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotMatrix {
    pub entries: CMatrix,
    pub pilot_energy: f64,
}

pub fn build_pilot_matrix(f: &FramePlan, pilot_energy: f64) -> PilotMatrix {
    let k = f.k_pilots;
    let mut entries = CMatrix::zeros(k, f.block_len());
    let amplitude = Complex64::new(pilot_energy.max(0.0).sqrt(), 0.0);
    for m in 0..k {
        entries[(m, k - 1 - m)] = amplitude;
    }
    PilotMatrix { entries, pilot_energy }
}

/// Received pilot vector, most recent pilot first.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingObservation {
    pub y: CVector,
    pub pilot_times: Vec<i64>,
    pub decision: Decision,
    pub pilot_energy: f64,
}

/// One simulated frame: the observation plus the fading block it came from.
#[derive(Debug, Clone)]
pub struct SimulatedBlock {
    pub observation: TrainingObservation,
    /// True fading coefficients at `FramePlan::block_times()`.
    pub truth: CVector,
}

/// Simulates the `K` pilot observations of one block under a known true
/// state. Draw order: `K` pilot noise samples, then the fading trajectory,
/// so a longer block extends rather than reshuffles a shorter one.
pub fn simulate_block<R: Rng + ?Sized>(
    scenario: &Scenario,
    decision: Decision,
    truth_state: Hypothesis,
    pilot_energy: f64,
    rng: &mut R,
) -> SimulatedBlock {
    let frame = &scenario.frame;
    let k = frame.k_pilots;
    let m = frame.m;
    let sigma_w2 = noise_variance(&scenario.noise, truth_state);
    let noise: Vec<Complex64> = (0..k).map(|_| complex_normal(rng, sigma_w2)).collect();

    // Trajectory starts at the oldest pilot, time −(K−1)M.
    let offset = (k - 1) * m;
    let trajectory = generate_trajectory(&scenario.fading, offset + m, rng);
    let times = frame.block_times();
    let truth =
        CVector::from_iterator(times.len(), times.iter().map(|&t| trajectory.samples[(t + offset as i64) as usize]));

    let amplitude = pilot_energy.max(0.0).sqrt();
    let pilot_times: Vec<i64> = (0..k).map(|row| -((row * m) as i64)).collect();
    let y = CVector::from_iterator(k, (0..k).map(|row| truth[k - 1 - row] * amplitude + noise[row]));
    SimulatedBlock { observation: TrainingObservation { y, pilot_times, decision, pilot_energy }, truth }
}
