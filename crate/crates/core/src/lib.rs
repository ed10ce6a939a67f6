//! Pilot-assisted channel estimation and achievable rates for a secondary
//! user sharing spectrum with a primary user it can only sense imperfectly.
//!
//! The secondary transmitter sends one pilot every `M` symbols with an
//! energy split `μ_j` that depends on its sensing decision `Ĥj`. Missed
//! detections leave primary-user interference on the pilots, so the
//! disturbance seen by the estimator is a two-component Gaussian mixture.
//!
//! * [`model`]: scenario parameters, sensing posteriors, energy split.
//! * [`fading`]: Gauss-Markov fading trajectories and covariances.
//! * [`sensing`]: per-frame state and decision draws.
//! * [`estimation`]: MMSE and L-MMSE estimators, Monte Carlo and analytic MSE.
//! * [`rates`]: BPSK and Gaussian-input achievable rates.
//! * [`optimizer`]: grid search over `M`, μ0 and μ1.
//!
//! Monte Carlo routines take an [`Executor`] and a seed; results are a pure
//! function of the seed and inputs, whatever the executor.

pub mod error;
pub mod estimation;
pub mod exec;
pub mod fading;
pub mod linalg;
pub mod model;
pub mod optimizer;
pub mod rates;
pub mod sensing;
pub mod stats;
pub mod stream;

pub use error::{Error, Result};
pub use estimation::{ChannelEstimate, EstimatorKind, MseReport};
pub use exec::{Executor, Serial};
pub use linalg::{CMatrix, CVector};
pub use model::{Decision, EnergyPolicy, FadingParams, FramePlan, Hypothesis, NoiseParams, Scenario, SensingModel};
pub use optimizer::{optimize_training, GridSpec, Optimum, RateSurface};
pub use rates::{block_rate, InputKind, RatePoint, RateSettings};
pub use stats::MeanEstimate;
