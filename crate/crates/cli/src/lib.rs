//! Experiment harness: configuration, sweeps, and CSV output for the
//! `cogest` library.

pub mod config;
pub mod experiments;
pub mod pool;
pub mod table;

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

pub use config::{ConfigError, ExperimentConfig, SweepSpec, SweepVariable};
pub use experiments::{run_mse_sweep, run_optimize, run_rate_sweep};
pub use pool::RayonExecutor;
pub use table::{emit_csv, Cell, ResultTable};

/// Build version, `v<crate version>` followed by `git describe` output when
/// the build ran inside a repository.
pub const VERSION: &str = env!("COGEST_BUILD_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    MseSweep,
    RateSweep,
    Optimize,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::MseSweep => "mse-sweep",
            Command::RateSweep => "rate-sweep",
            Command::Optimize => "optimize",
        }
    }

    pub fn run<E: cogest::Executor>(self, cfg: &ExperimentConfig, exec: &E) -> Result<ResultTable> {
        match self {
            Command::MseSweep => run_mse_sweep(cfg, exec),
            Command::RateSweep => run_rate_sweep(cfg, exec),
            Command::Optimize => run_optimize(cfg, exec),
        }
    }

    /// Trial count this command will use for `cfg`.
    pub fn trials(self, cfg: &ExperimentConfig) -> usize {
        match self {
            Command::MseSweep => cfg.mse_trials(),
            Command::RateSweep | Command::Optimize => cfg.rate_trials(),
        }
    }
}

#[derive(Debug, Serialize)]
struct Sidecar<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    preset: Option<&'a str>,
    config: &'a ExperimentConfig,
}

/// Path of the provenance sidecar written next to `csv`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    let mut name = csv.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".meta.json");
    csv.with_file_name(name)
}

/// Writes the CSV and a JSON sidecar with the resolved configuration.
pub fn write_outputs(
    table: &ResultTable,
    cfg: &ExperimentConfig,
    command: Command,
    preset: Option<&str>,
    path: &Path,
) -> Result<()> {
    emit_csv(table, path)?;
    let mut resolved = cfg.clone();
    resolved.trials = Some(command.trials(cfg));
    resolved.output_path = Some(path.to_path_buf());
    let sidecar = Sidecar { tool: "cogest", version: VERSION, command: command.as_str(), preset, config: &resolved };
    let meta = sidecar_path(path);
    let text = serde_json::to_string_pretty(&sidecar)?;
    std::fs::write(&meta, text + "\n").with_context(|| format!("writing {}", meta.display()))?;
    Ok(())
}
