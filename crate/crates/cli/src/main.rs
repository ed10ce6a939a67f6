use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use cogest_cli::pool::{default_workers, WORKERS_ENV};
use cogest_cli::{write_outputs, Command, ExperimentConfig, RayonExecutor};

#[derive(Parser)]
#[command(name = "cogest", version = cogest_cli::VERSION, about = "Channel estimation and rate experiments under imperfect sensing")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Estimator MSE against a swept parameter.
    MseSweep(Common),
    /// Achievable rates against a swept parameter.
    RateSweep(Common),
    /// Grid search for the rate-maximizing pilot period and energy split.
    Optimize(Common),
    /// List the shipped presets.
    Presets,
}

#[derive(Args)]
struct Common {
    /// JSON config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Shipped preset (fig3 … fig10, interweave); explicit flags override it.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Output CSV; a `.meta.json` sidecar is written next to it. Defaults to
    /// the config's `output_path`, else stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
}

fn run(command: Command, args: Common) -> Result<()> {
    let mut cfg = match (&args.preset, &args.config) {
        (Some(_), Some(_)) => bail!("--preset and --config are mutually exclusive"),
        (Some(name), None) => ExperimentConfig::preset(name)?,
        (None, Some(path)) => ExperimentConfig::load(path)?,
        (None, None) => ExperimentConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if args.trials.is_some() {
        cfg.trials = args.trials;
    }
    if args.out.is_some() {
        cfg.output_path = args.out.clone();
    }
    cfg.validate()?;

    let workers = match args.workers {
        Some(n) => n,
        None => default_workers()?,
    };
    let exec = RayonExecutor::new(workers)?;
    let table = command.run(&cfg, &exec)?;
    match &cfg.output_path {
        Some(path) => {
            write_outputs(&table, &cfg, command, args.preset.as_deref(), path)?;
            eprintln!("wrote {} rows to {}", table.len(), path.display());
        }
        None => {
            let mut out = std::io::stdout().lock();
            table.write_csv(&mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Sub::MseSweep(a) => run(Command::MseSweep, a),
        Sub::RateSweep(a) => run(Command::RateSweep, a),
        Sub::Optimize(a) => run(Command::Optimize, a),
        Sub::Presets => {
            for name in cogest_cli::config::PRESET_NAMES {
                println!("{name}");
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
