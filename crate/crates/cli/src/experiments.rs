//! Sweep and optimization drivers producing [`ResultTable`]s.

use anyhow::{bail, Result};
use cogest::estimation::MseExperiment;
use cogest::rates::block_rate;
use cogest::{optimize_training, Decision, Executor, MeanEstimate, RateSettings};

use crate::config::{ExperimentConfig, SweepVariable};
use crate::table::{Cell, ResultTable};

const MSE_VARIABLES: [SweepVariable; 4] =
    [SweepVariable::FalseAlarm, SweepVariable::Detection, SweepVariable::PilotPeriod, SweepVariable::InterferenceRatio];

const RATE_VARIABLES: [SweepVariable; 4] =
    [SweepVariable::PilotPeriod, SweepVariable::MuIdle, SweepVariable::MuBusy, SweepVariable::SnrIdleDb];

/// `M`, μ0 and μ1 are grid dimensions and cannot also be swept.
const OPTIMIZE_VARIABLES: [SweepVariable; 4] =
    [SweepVariable::FalseAlarm, SweepVariable::Detection, SweepVariable::InterferenceRatio, SweepVariable::SnrIdleDb];

fn check_variable(cfg: &ExperimentConfig, allowed: &[SweepVariable], command: &str) -> Result<()> {
    if let Some(v) = cfg.sweep_variable() {
        if !allowed.contains(&v) {
            let names: Vec<_> = allowed.iter().map(|a| a.as_str()).collect();
            bail!("invalid value for `sweep.variable`: {command} sweeps one of {}, got {v}", names.join(", "));
        }
    }
    Ok(())
}

/// Leading sweep column, present only when the config sweeps something.
fn with_sweep_column(cfg: &ExperimentConfig, rest: &[&str]) -> ResultTable {
    let mut cols: Vec<String> = cfg.sweep_variable().map(|v| v.as_str().to_string()).into_iter().collect();
    cols.extend(rest.iter().map(|s| s.to_string()));
    ResultTable::new(cols)
}

fn sweep_cell(cfg: &ExperimentConfig, value: f64) -> Vec<Cell> {
    match cfg.sweep_variable() {
        Some(SweepVariable::PilotPeriod) => vec![Cell::Int(value as i64)],
        Some(_) => vec![Cell::Num(value)],
        None => Vec::new(),
    }
}

fn estimate_cells(e: Option<MeanEstimate>) -> [Cell; 2] {
    match e {
        Some(e) => [Cell::Num(e.mean), Cell::Num(e.std_error)],
        None => [Cell::Num(f64::NAN), Cell::Num(f64::NAN)],
    }
}

/// Per-coefficient MSE for every sweep value and estimator: empirical
/// overall and per sensing decision, plus the analytic L-MMSE values.
pub fn run_mse_sweep<E: Executor>(cfg: &ExperimentConfig, exec: &E) -> Result<ResultTable> {
    cfg.validate()?;
    check_variable(cfg, &MSE_VARIABLES, "mse-sweep")?;
    let mut table = with_sweep_column(
        cfg,
        &[
            "estimator",
            "mse",
            "mse_se",
            "mse_idle",
            "mse_idle_se",
            "mse_busy",
            "mse_busy_se",
            "lmmse_analytic",
            "lmmse_analytic_idle",
            "lmmse_analytic_busy",
            "trials",
        ],
    );
    let trials = cfg.mse_trials();
    for value in cfg.sweep_values() {
        let scenario = cfg.scenario_at(value)?;
        let experiment = MseExperiment::new(&scenario, cfg.seed)?;
        let analytic = experiment.analytic_lmmse();
        for &kind in &cfg.estimators {
            let report = experiment.run(kind, trials, exec);
            let mut row = sweep_cell(cfg, value);
            row.push(kind.as_str().into());
            row.extend(estimate_cells(Some(report.overall)));
            row.extend(estimate_cells(report.given(Decision::Idle)));
            row.extend(estimate_cells(report.given(Decision::Busy)));
            row.push(Cell::Num(analytic.total));
            for d in Decision::ALL {
                row.push(Cell::Num(analytic.per_decision[d.index()].unwrap_or(f64::NAN)));
            }
            row.push(trials.into());
            table.push(row)?;
        }
    }
    Ok(table)
}

fn rate_settings(cfg: &ExperimentConfig) -> RateSettings {
    RateSettings { outer_trials: cfg.rate_trials(), inner_samples: cfg.inner_samples, estimator: cfg.rate_estimator }
}

/// Block rate for every sweep value and input kind. Every row uses the
/// same seed, so neighbouring points share their random numbers.
pub fn run_rate_sweep<E: Executor>(cfg: &ExperimentConfig, exec: &E) -> Result<ResultTable> {
    cfg.validate()?;
    check_variable(cfg, &RATE_VARIABLES, "rate-sweep")?;
    let mut table = with_sweep_column(
        cfg,
        &["input", "m", "mu0", "mu1", "rate", "rate_se", "term_idle", "term_idle_se", "term_busy", "term_busy_se"],
    );
    let settings = rate_settings(cfg);
    for value in cfg.sweep_values() {
        let scenario = cfg.scenario_at(value)?;
        for &input in &cfg.inputs {
            let p = block_rate(&scenario, input, &settings, cfg.seed, exec)?;
            let mut row = sweep_cell(cfg, value);
            row.push(input.as_str().into());
            row.push(p.m.into());
            row.push(p.mu_idle.into());
            row.push(p.mu_busy.into());
            row.push(p.rate.into());
            row.push(p.std_error.into());
            for t in p.per_decision {
                row.extend(estimate_cells(Some(t)));
            }
            table.push(row)?;
        }
    }
    Ok(table)
}

/// Grid optimum per input kind. Without a sweep the full rate surface
/// follows the optimum rows; with a sweep only the optima are emitted.
pub fn run_optimize<E: Executor>(cfg: &ExperimentConfig, exec: &E) -> Result<ResultTable> {
    cfg.validate()?;
    check_variable(cfg, &OPTIMIZE_VARIABLES, "optimize")?;
    let mut table = with_sweep_column(cfg, &["record", "input", "m", "mu0", "mu1", "rate", "rate_se", "is_optimum"]);
    let settings = rate_settings(cfg);
    let grid = cfg.grid_spec();
    let mut surfaces = Vec::new();
    for value in cfg.sweep_values() {
        let scenario = cfg.scenario_at(value)?;
        for &input in &cfg.inputs {
            let opt = optimize_training(&scenario, input, &grid, &settings, cfg.seed, exec)?;
            let mut row = sweep_cell(cfg, value);
            row.extend([
                "optimum".into(),
                input.as_str().into(),
                opt.m_star.into(),
                opt.mu0_star.into(),
                opt.mu1_star.into(),
                opt.rate.rate.into(),
                opt.rate.std_error.into(),
                Cell::Int(1),
            ]);
            table.push(row)?;
            if cfg.sweep.is_none() {
                surfaces.push((input, opt));
            }
        }
    }
    for (input, opt) in surfaces {
        for p in opt.surface.points() {
            let is_opt = p.m == opt.m_star && p.mu_idle == opt.mu0_star && p.mu_busy == opt.mu1_star;
            table.push(vec![
                "surface".into(),
                input.as_str().into(),
                p.m.into(),
                p.mu_idle.into(),
                p.mu_busy.into(),
                p.rate.into(),
                p.std_error.into(),
                Cell::Int(is_opt as i64),
            ])?;
        }
    }
    Ok(table)
}
