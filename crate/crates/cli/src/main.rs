use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context as _;
use clap::Parser;
use nogo_cli::{run_command, CommandName, ExperimentConfig, Format};

/// Run lattice, measurement and hidden-variable experiments.
#[derive(Debug, Parser)]
#[command(name = "nogo", version)]
struct Args {
    /// Command to run.
    #[arg(value_enum)]
    command: CommandName,
    /// Experiment config (TOML). Defaults to the spin-1/2 z/x setup.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// RNG seed, decimal or 0x-prefixed hex.
    #[arg(long, env = "NOGO_SEED", value_parser = parse_seed)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

fn run(args: &Args) -> anyhow::Result<u8> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.run.seed = seed;
    }
    if let Some(trials) = args.trials {
        anyhow::ensure!(trials > 0, "trials must be positive");
        cfg.run.trials = trials;
    }
    if let Some(tol) = args.tol {
        anyhow::ensure!(tol > 0.0 && tol.is_finite(), "tol must be positive");
        cfg.run.tol = tol;
    }
    let report = run_command(args.command, &cfg)?;
    let rendered = report.render(args.format);
    match &args.out {
        Some(path) => std::fs::write(path, rendered).with_context(|| format!("cannot write {}", path.display()))?,
        None => std::io::stdout().write_all(rendered.as_bytes())?,
    }
    Ok(report.exit_code)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
