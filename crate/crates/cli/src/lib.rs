//! Command-line front end for the truncated Toeplitz experiments.
//!
//! Three subcommands share one JSON config: `verify` runs the invariant
//! suite, `matrix` writes compressed matrices, `szego` runs the spectral
//! distribution experiment.

pub mod commands;
pub mod config;
pub mod error;
pub mod export;
pub mod svg;

use clap::{Parser, Subcommand};
use config::{ModeConfig, Overrides};
use error::{CliError, CliResult};
use std::ffi::OsString;
use std::path::PathBuf;

pub const THREADS_ENV: &str = "SZEGO_THREADS";

#[derive(Debug, Parser)]
#[command(name = "szego", version, about = "Truncated Toeplitz operators on model spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; overrides the config's `output`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Quadrature grid size (power of two, at least 16).
    #[arg(long)]
    pub grid_size: Option<usize>,
    /// eigen, singular or both.
    #[arg(long)]
    pub mode: Option<ModeConfig>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the invariant suite at the largest scheduled n.
    Verify(CommonArgs),
    /// Write the compressed matrix and block diagnostics.
    Matrix(CommonArgs),
    /// Run the spectral distribution experiment.
    Szego(CommonArgs),
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Config(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    // a pool that is already built keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn dispatch(command: &Command) -> CliResult<()> {
    configure_threads()?;
    let (args, f): (&CommonArgs, fn(&config::Run) -> CliResult<()>) = match command {
        Command::Verify(a) => (a, commands::cmd_verify),
        Command::Matrix(a) => (a, commands::cmd_matrix),
        Command::Szego(a) => (a, commands::cmd_szego),
    };
    let overrides = Overrides {
        out: args.out.clone(),
        grid_size: args.grid_size,
        mode: args.mode,
    };
    let run = config::load(&args.config, &overrides)?;
    f(&run)
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
