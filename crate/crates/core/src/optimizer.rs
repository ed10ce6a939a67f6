//! Grid search over the pilot period `M` and the training fractions
//! `(μ0, μ1)`.
//!
//! For fixed `M` the block rate separates into `Pr{Ĥ0} T_0(M, μ0) +
//! Pr{Ĥ1} T_1(M, μ1)`, so each decision's fraction is optimized on its own
//! one-dimensional grid. All grid points share random numbers through the
//! keyed substreams of [`crate::rates`], which keeps the argmax stable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{Executor, Serial};
use crate::model::{Decision, Scenario};
use crate::rates::{decision_term, InputKind, RatePoint, RateSettings};
use crate::stats::MeanEstimate;

/// Search grid. `μ` ranges are inclusive and stepped from their lower end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub m_min: usize,
    pub m_max: usize,
    pub mu_step: f64,
    pub mu_idle: (f64, f64),
    pub mu_busy: (f64, f64),
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { m_min: 2, m_max: 40, mu_step: 0.01, mu_idle: (0.0, 1.0), mu_busy: (0.0, 1.0) }
    }
}

impl GridSpec {
    /// A grid with `μ` pinned to the given values.
    pub fn fixed_mu(m_min: usize, m_max: usize, mu_idle: f64, mu_busy: f64) -> Self {
        GridSpec { m_min, m_max, mu_step: 0.01, mu_idle: (mu_idle, mu_idle), mu_busy: (mu_busy, mu_busy) }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_min < 2 {
            return Err(Error::invalid("m_min", self.m_min as f64, "pilot period must be at least 2"));
        }
        if self.m_max < self.m_min {
            return Err(Error::invalid("m_max", self.m_max as f64, "must not be below m_min"));
        }
        if !(self.mu_step > 0.0 && self.mu_step <= 0.5) {
            return Err(Error::invalid("mu_step", self.mu_step, "must lie in (0, 0.5]"));
        }
        for (name, (lo, hi)) in [("mu_idle", self.mu_idle), ("mu_busy", self.mu_busy)] {
            if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
                return Err(Error::invalid(name, lo, "range must satisfy 0 <= from <= to <= 1"));
            }
        }
        Ok(())
    }

    pub fn m_values(&self) -> Vec<usize> {
        (self.m_min..=self.m_max).collect()
    }

    pub fn mu_values(&self, decision: Decision) -> Vec<f64> {
        let (lo, hi) = match decision {
            Decision::Idle => self.mu_idle,
            Decision::Busy => self.mu_busy,
        };
        let n = ((hi - lo) / self.mu_step + 1e-9).floor() as usize;
        (0..=n).map(|i| round12(lo + i as f64 * self.mu_step).min(hi)).collect()
    }
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// Per-decision terms `T_j(M, μ_j)` on the whole grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateSurface {
    pub scenario: Scenario,
    pub m_values: Vec<usize>,
    pub mu_values: [Vec<f64>; 2],
    /// `terms[j][m_index][mu_index]`.
    pub terms: [Vec<Vec<MeanEstimate>>; 2],
}

impl RateSurface {
    fn scenario_at(&self, m: usize, mu_idle: f64, mu_busy: f64) -> Scenario {
        let mut s = self.scenario;
        s.frame.m = m;
        s.energy.mu_idle = mu_idle;
        s.energy.mu_busy = mu_busy;
        s
    }

    /// Rate at grid indices `(M, μ0, μ1)`.
    pub fn point(&self, m_index: usize, idle_index: usize, busy_index: usize) -> RatePoint {
        let s = self.scenario_at(self.m_values[m_index], self.mu_values[0][idle_index], self.mu_values[1][busy_index]);
        RatePoint::assemble(&s, [self.terms[0][m_index][idle_index], self.terms[1][m_index][busy_index]])
    }

    /// Number of `(M, μ0, μ1)` combinations.
    pub fn len(&self) -> usize {
        self.m_values.len() * self.mu_values[0].len() * self.mu_values[1].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every grid point, `M` outermost and `μ1` innermost.
    pub fn points(&self) -> impl Iterator<Item = RatePoint> + '_ {
        let (n0, n1) = (self.mu_values[0].len(), self.mu_values[1].len());
        (0..self.len()).map(move |i| self.point(i / (n0 * n1), (i / n1) % n0, i % n1))
    }

    /// Index of the largest term for `decision` at `M = m_values[m_index]`;
    /// ties go to the smaller μ.
    pub fn best_mu_index(&self, decision: Decision, m_index: usize) -> usize {
        let row = &self.terms[decision.index()][m_index];
        let mut best = 0;
        for (i, t) in row.iter().enumerate() {
            if t.mean > row[best].mean {
                best = i;
            }
        }
        best
    }

    /// Best rate at `M = m_values[m_index]` with both fractions optimized.
    pub fn best_for_m(&self, m_index: usize) -> RatePoint {
        self.point(m_index, self.best_mu_index(Decision::Idle, m_index), self.best_mu_index(Decision::Busy, m_index))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub m_star: usize,
    pub mu0_star: f64,
    pub mu1_star: f64,
    pub rate: RatePoint,
    pub surface: RateSurface,
}

/// Evaluates every per-decision term on the grid and returns the maximizer
/// of the assembled rate. Ties go to the smaller `M`, then smaller μ0, then
/// smaller μ1.
///
/// `scenario` supplies every parameter except `M`, μ0 and μ1. Grid points
/// are distributed over `exec`; each term runs its trials serially.
pub fn optimize_training<E: Executor>(
    scenario: &Scenario,
    input: InputKind,
    grid: &GridSpec,
    settings: &RateSettings,
    seed: u64,
    exec: &E,
) -> Result<Optimum> {
    grid.validate()?;
    settings.validate()?;
    let m_values = grid.m_values();
    let mu_values = [grid.mu_values(Decision::Idle), grid.mu_values(Decision::Busy)];
    for &m in &m_values {
        let mut s = *scenario;
        s.frame.m = m;
        s.validate()?;
    }

    let jobs: Vec<(Decision, usize, usize)> = Decision::ALL
        .iter()
        .flat_map(|&d| {
            let n_mu = mu_values[d.index()].len();
            (0..m_values.len()).flat_map(move |mi| (0..n_mu).map(move |ui| (d, mi, ui)))
        })
        .collect();
    let results = exec.map(jobs.len(), |i| {
        let (d, mi, ui) = jobs[i];
        let mut s = *scenario;
        s.frame.m = m_values[mi];
        s.energy.set_mu(d, mu_values[d.index()][ui]);
        decision_term(&s, d, input, settings, seed, &Serial)
    });

    let mut terms: [Vec<Vec<MeanEstimate>>; 2] = [
        vec![Vec::with_capacity(mu_values[0].len()); m_values.len()],
        vec![Vec::with_capacity(mu_values[1].len()); m_values.len()],
    ];
    for (&(d, mi, _), r) in jobs.iter().zip(results) {
        terms[d.index()][mi].push(r?);
    }
    let surface = RateSurface { scenario: *scenario, m_values, mu_values, terms };

    let mut best_index = 0;
    let mut best = surface.best_for_m(0);
    for mi in 1..surface.m_values.len() {
        let candidate = surface.best_for_m(mi);
        if candidate.rate > best.rate {
            best = candidate;
            best_index = mi;
        }
    }
    Ok(Optimum {
        m_star: surface.m_values[best_index],
        mu0_star: best.mu_idle,
        mu1_star: best.mu_busy,
        rate: best,
        surface,
    })
}
