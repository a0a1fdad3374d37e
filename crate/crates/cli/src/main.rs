//! `ho-skip`: coverage, handover cost and average throughput of
//! velocity-aware handover skipping in a two-tier Poisson cellular network.
//!
//! `run` evaluates a configured (strategy, threshold, femto delay, velocity)
//! grid and writes one CSV or JSON row per grid point; `validate` checks a
//! configuration against the model's numerical invariant suite.
//!
//! Exit codes: 0 on success, 1 for usage or configuration errors, 2 for
//! numerical or tolerance failures.

mod checks;
mod config;
mod sweep;

use std::fs;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

/// Failures grouped by exit code: configuration and usage problems exit
/// with 1, numerical and tolerance failures with 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numeric(String),
}

#[derive(Parser)]
#[command(
    name = "ho-skip",
    version,
    about = "Coverage, handover cost and throughput of handover skipping \
             in a two-tier Poisson cellular network"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the configured grid and write one row per grid point.
    Run(RunArgs),
    /// Check a configuration and run the numerical invariant suite.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration file.
    #[arg(long, value_name = "FILE", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in configuration (see `--preset help` for the list).
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Override the configured random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the configured Monte Carlo sample count (0 disables the
    /// Monte Carlo columns).
    #[arg(long)]
    mc_samples: Option<u64>,
    /// Exit with status 2 if any row is non-finite or the Monte Carlo
    /// coverage deviates from the analytic value beyond
    /// max(0.01, 3 standard errors).
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct ValidateArgs {
    /// TOML configuration file.
    #[arg(long, value_name = "FILE", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in configuration to validate instead of a file.
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Override the configured random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the Monte Carlo sample count used by the agreement check.
    #[arg(long)]
    mc_samples: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Validate(args) => validate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ CliError::Config(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e @ CliError::Numeric(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load_config(
    path: &Option<PathBuf>,
    preset: &Option<String>,
    seed: Option<u64>,
    mc_samples: Option<u64>,
) -> Result<config::RawConfig, CliError> {
    let text = match (path, preset) {
        (Some(path), None) => fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read {}: {e}", path.display()))
        })?,
        (None, Some(name)) => config::preset(name)
            .ok_or_else(|| {
                let names: Vec<&str> = config::PRESETS.iter().map(|(n, _)| *n).collect();
                CliError::Config(format!(
                    "unknown preset '{name}' (available: {})",
                    names.join(", ")
                ))
            })?
            .to_string(),
        (None, None) => {
            return Err(CliError::Config(
                "provide --config <file> or --preset <name>".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap rejects --config with --preset"),
    };
    let mut raw = config::parse(&text)?;
    if let Some(seed) = seed {
        raw.seed = seed;
    }
    if let Some(n) = mc_samples {
        raw.mc_samples = n;
    }
    Ok(raw)
}

fn run(args: RunArgs) -> Result<(), CliError> {
    let raw = load_config(&args.config, &args.preset, args.seed, args.mc_samples)?;
    let plan = raw.resolve()?;
    let result = sweep::run_sweep(&plan)?;

    // rows are written even when strict checks fail, so they stay inspectable
    match &args.out {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| {
                CliError::Config(format!("cannot write {}: {e}", path.display()))
            })?;
            emit(BufWriter::new(file), args.format, &plan, &result.rows)?;
            eprintln!("wrote {} rows to {}", result.rows.len(), path.display());
        }
        None => emit(io::stdout().lock(), args.format, &plan, &result.rows)?,
    }

    if args.strict && !result.violations.is_empty() {
        for v in &result.violations {
            eprintln!("strict: {v}");
        }
        return Err(CliError::Numeric(format!(
            "{} grid points failed strict checks",
            result.violations.len()
        )));
    }
    Ok(())
}

fn emit<W: io::Write>(
    out: W,
    format: Format,
    plan: &config::RunPlan,
    rows: &[sweep::Row],
) -> Result<(), CliError> {
    match format {
        Format::Csv => sweep::write_csv(out, plan, rows),
        Format::Json => sweep::write_json(out, plan, rows),
    }
}

fn validate(args: ValidateArgs) -> Result<(), CliError> {
    let raw = load_config(&args.config, &args.preset, args.seed, args.mc_samples)?;
    let plan = raw.resolve()?;
    println!(
        "ok    {:<22} {} strategies, {} thresholds, eta = {}",
        "config",
        plan.choices.len(),
        plan.theta_db.len(),
        plan.params.path_loss_exponent
    );
    checks::run_all(&plan)
}
