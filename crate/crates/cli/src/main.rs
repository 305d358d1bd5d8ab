use std::path::PathBuf;
use std::process::ExitCode;

use adaprox_cli::output::{resolve_output_dir, write_outcome};
use adaprox_cli::sweep::{render_table, run_sweep};
use adaprox_cli::{run_experiment, ExperimentConfig, OUT_DIR_ENV};
use clap::{Parser, Subcommand};

/// Run adaptive extra-gradient / mirror-prox experiments.
#[derive(Parser)]
#[command(name = "adaprox", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory (default: $ADAPROX_OUT_DIR/<name>, or out/<name>).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Maximum number of seeds run concurrently.
    #[arg(long, global = true, default_value_t = default_workers())]
    workers: usize,
    /// Only print errors.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run every seed of a config and write traces, report and plot data.
    Run { config: PathBuf },
    /// Parse and validate a config, printing its normalized form.
    Validate { config: PathBuf },
    /// Compare the algorithms listed in the config's [sweep] section.
    Sweep { config: PathBuf },
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn output_dir(cli: &Cli, config: &ExperimentConfig) -> PathBuf {
    let env_root = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    resolve_output_dir(cli.out.as_deref(), env_root.as_deref(), config)
}

fn execute(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Validate { config } => {
            let c = ExperimentConfig::load(config)?;
            print!("{}", c.to_toml());
        }
        Command::Run { config } => {
            let c = ExperimentConfig::load(config)?;
            let dir = output_dir(cli, &c);
            let outcome = run_experiment(&c, cli.workers)?;
            let report = write_outcome(&dir, &outcome)?;
            if !cli.quiet {
                println!("{}", serde_json::to_string_pretty(&report)?);
                println!("artifacts written to {}", dir.display());
            }
        }
        Command::Sweep { config } => {
            let c = ExperimentConfig::load(config)?;
            anyhow::ensure!(c.sweep.is_some(), "config has no [sweep] section");
            let dir = output_dir(cli, &c);
            let report = run_sweep(&c, &dir, cli.workers)?;
            if !cli.quiet {
                print!("{}", render_table(&report));
                println!("artifacts written to {}", dir.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "error" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
