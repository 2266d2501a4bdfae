use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ordsketch_cli::config::{GameplayConfig, QuantileConfig};
use ordsketch_cli::{gameplay, quantile, with_pool, HarnessError, SweepSummary};

/// Streaming ordinal bucketing experiments: quantile-error sweeps and
/// noisy game-play runs, reproducible from a declarative TOML plan.
#[derive(Parser)]
#[command(name = "ordsketch", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the bucketing policies over synthetic streams and record the
    /// quantile error E per run.
    QuantileSweep(RunArgs),
    /// Play full grid-world episodes per (variant, game, sigma, budget).
    Gameplay(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment plan.
    #[arg(long)]
    config: PathBuf,
    /// Override the plan's output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the plan's base seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker pool size (default: one per CPU).
    #[arg(long)]
    jobs: Option<usize>,
    /// Parse and validate the plan, then exit without running.
    #[arg(long)]
    validate_only: bool,
}

const EXIT_CONFIG: u8 = 1;
const EXIT_RUNTIME: u8 = 2;

fn load<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn finish(result: Result<SweepSummary, HarnessError>) -> ExitCode {
    match result {
        Ok(summary) => {
            println!(
                "wrote {} rows to {}{}",
                summary.rows,
                summary.out.display(),
                summary
                    .aggregate_out
                    .as_ref()
                    .map(|p| format!(" (aggregate: {})", p.display()))
                    .unwrap_or_default()
            );
            if summary.failures > 0 {
                eprintln!("{} run(s) failed; see the error column", summary.failures);
                ExitCode::from(EXIT_RUNTIME)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(HarnessError::Config(errors)) => {
            for e in &errors {
                eprintln!("config error: {e}");
            }
            ExitCode::from(EXIT_CONFIG)
        }
        Err(HarnessError::Io(e)) => {
            eprintln!("io error: {e}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::QuantileSweep(args) => {
            let mut cfg: QuantileConfig = match load(&args.config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            if let Some(out) = args.out {
                cfg.out = out;
            }
            if let Some(seed) = args.seed {
                cfg.base_seed = seed;
            }
            let errors = cfg.validate();
            if !errors.is_empty() {
                return finish(Err(HarnessError::Config(errors)));
            }
            if args.validate_only {
                println!("config ok: {} grid points", cfg.grid_len());
                return ExitCode::SUCCESS;
            }
            finish(with_pool(args.jobs, || quantile::run_quantile_sweep(&cfg)))
        }
        Command::Gameplay(args) => {
            let mut cfg: GameplayConfig = match load(&args.config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            if let Some(out) = args.out {
                cfg.out = out;
            }
            if let Some(seed) = args.seed {
                cfg.base_seed = seed;
            }
            let errors = cfg.validate();
            if !errors.is_empty() {
                return finish(Err(HarnessError::Config(errors)));
            }
            if args.validate_only {
                println!("config ok: {} grid points", cfg.grid_len());
                return ExitCode::SUCCESS;
            }
            finish(with_pool(args.jobs, || gameplay::run_gameplay(&cfg)))
        }
    }
}
