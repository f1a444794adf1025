use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use parimutuel_cli::commands::oracle_table;
use parimutuel_cli::{run_optimize_take, run_oracle, run_solve, run_sweep, CliError, Scenario};
use parimutuel_core::stackelberg::DEFAULT_GRID_POINTS;
use parimutuel_core::DEFAULT_FP_TOL;

#[derive(Parser)]
#[command(
    name = "parimutuel",
    version,
    about = "Parimutuel equilibrium experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file (JSON).
    #[arg(long)]
    scenario: PathBuf,
    /// Fixed-point tolerance.
    #[arg(long, default_value_t = DEFAULT_FP_TOL)]
    fp_tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the equilibrium at the scenario's kappa.
    Solve {
        #[command(flatten)]
        common: Common,
    },
    /// Solve across the scenario's kappa range.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Add a row per kappa with the atomic budget set to 1e-10.
        #[arg(long)]
        baseline: bool,
    },
    /// Find the revenue-maximising kappa.
    OptimizeTake {
        #[command(flatten)]
        common: Common,
        /// Write the revenue profile CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Number of grid points before refinement.
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid: usize,
    },
    /// Compare against a finite population of bettors.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Number of discrete bettors.
        #[arg(long, default_value_t = 2000)]
        n: usize,
    },
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve { common } => {
            let s = Scenario::load(&common.scenario)?;
            emit(&run_solve(&s, common.fp_tol)?, None)
        }
        Command::Sweep {
            common,
            out,
            baseline,
        } => {
            let s = Scenario::load(&common.scenario)?;
            emit(&run_sweep(&s, baseline, common.fp_tol)?, out.as_deref())
        }
        Command::OptimizeTake { common, out, grid } => {
            let s = Scenario::load(&common.scenario)?;
            let report = run_optimize_take(&s, grid, common.fp_tol)?;
            emit(&report.summary, None)?;
            if let Some(path) = out {
                emit(&report.profile, Some(&path))?;
            }
            Ok(())
        }
        Command::Oracle { common, n } => {
            let s = Scenario::load(&common.scenario)?;
            let reports = run_oracle(&s, n, common.fp_tol)?;
            emit(&oracle_table(&s, &reports), None)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
