//! Per-frame primary-user state and sensing outcome.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::model::{Decision, Hypothesis, SensingModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameState {
    pub true_state: Hypothesis,
    pub decision: Decision,
}

/// Draws the true state from the prior, then the decision from `(P_d, P_f)`.
/// Consumes exactly two uniforms.
pub fn draw_frame_state<R: Rng + ?Sized>(s: &SensingModel, rng: &mut R) -> FrameState {
    let u_state: f64 = rng.random();
    let u_decision: f64 = rng.random();
    let true_state = if u_state < s.prior_busy { Hypothesis::Busy } else { Hypothesis::Idle };
    let p_busy = s.decision_likelihood(Decision::Busy, true_state);
    let decision = if u_decision < p_busy { Decision::Busy } else { Decision::Idle };
    FrameState { true_state, decision }
}

/// Draws the true state given a sensing decision, from `Pr{H1 | Ĥj}`.
pub fn draw_true_state<R: Rng + ?Sized>(posterior_busy: f64, rng: &mut R) -> Hypothesis {
    let u: f64 = rng.random();
    if u < posterior_busy {
        Hypothesis::Busy
    } else {
        Hypothesis::Idle
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::sensing_marginals;
    use crate::stream::{Purpose, StreamKey};
    use proptest::prelude::*;

    fn counts(s: &SensingModel, n: usize, seed: u64) -> [[usize; 2]; 2] {
        let mut rng = StreamKey::new(seed, Purpose::Mse).rng(&[]);
        let mut c = [[0usize; 2]; 2];
        for _ in 0..n {
            let f = draw_frame_state(s, &mut rng);
            c[f.true_state.index()][f.decision.index()] += 1;
        }
        c
    }

    #[test]
    fn perfect_sensing_reports_truth() {
        let s = SensingModel { p_d: 1.0, p_f: 0.0, prior_busy: 0.3 };
        let c = counts(&s, 10_000, 1);
        assert_eq!(c[0][1], 0);
        assert_eq!(c[1][0], 0);
    }

    #[test]
    fn busy_decision_rate_matches_marginal() {
        let s = SensingModel { p_d: 0.9, p_f: 0.2, prior_busy: 0.2 };
        let n = 1_000_000;
        let c = counts(&s, n, 2);
        let rate = (c[0][1] + c[1][1]) as f64 / n as f64;
        let p = sensing_marginals(&s).1;
        assert!((p - 0.34).abs() < 1e-12);
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((rate - p).abs() < 3.0 * se, "rate {rate}");
    }

    #[test]
    fn idle_channel_false_alarms() {
        let s = SensingModel { p_d: 0.9, p_f: 0.25, prior_busy: 0.0 };
        let n = 200_000;
        let c = counts(&s, n, 3);
        assert_eq!(c[1][0] + c[1][1], 0);
        let rate = c[0][1] as f64 / n as f64;
        assert!((rate - 0.25).abs() < 3.0 * (0.25f64 * 0.75 / n as f64).sqrt());
    }

    proptest! {
        #![proptest_config(ProptestConfig {
            cases: 12,
            rng_seed: proptest::test_runner::RngSeed::Fixed(0x5e45),
            ..ProptestConfig::default()
        })]
        #[test]
        fn joint_frequencies_match(p_d in 0.0..=1.0f64, p_f in 0.0..=1.0f64, prior in 0.0..=1.0f64, seed in 0u64..1000) {
            let s = SensingModel { p_d, p_f, prior_busy: prior };
            let n = 100_000;
            let c = counts(&s, n, seed);
            for h in Hypothesis::ALL {
                for d in Decision::ALL {
                    let p = s.prior(h) * s.decision_likelihood(d, h);
                    let freq = c[h.index()][d.index()] as f64 / n as f64;
                    let se = (p * (1.0 - p) / n as f64).sqrt();
                    // A zero-variance cell must match exactly.
                    prop_assert!((freq - p).abs() <= 3.0 * se + 1e-12, "cell {:?}/{:?}: {} vs {}", h, d, freq, p);
                }
            }
        }
    }
}
