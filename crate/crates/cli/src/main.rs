//! `farey-spectrum`: matrix exports, eigenpairs, sweeps and verification
//! for the signed Farey transfer operators.

mod commands;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Parser, Subcommand, ValueEnum};
use farey_spectrum::eigensolver::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use farey_spectrum::Sign;

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_VERIFICATION: u8 = 2;
pub const EXIT_NO_CONVERGENCE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "farey-spectrum", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Export the truncated matrix A_N.
    Entries,
    /// Dominant eigenpair of A_N.
    Eigen,
    /// Eigenvalues over truncation sizes at fixed q.
    TruncSweep,
    /// Eigenvalues over a q grid at fixed N.
    QSweep,
    /// Weighted-norm partial sums S_N(k) for several N.
    Norms,
    /// Run every identity, quadrature and cross-check suite.
    Verify,
    /// Pointwise residual of the reconstructed eigenfunction.
    Residual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, clap::Args)]
pub struct Options {
    /// Exponent parameter q > 0.
    #[arg(long, global = true, default_value_t = 0.5)]
    pub q: f64,
    #[arg(long, global = true, default_value_t = 0.05)]
    pub q_min: f64,
    #[arg(long, global = true, default_value_t = 1.5)]
    pub q_max: f64,
    #[arg(long, global = true, default_value_t = 0.01)]
    pub q_step: f64,
    /// plus or minus.
    #[arg(long, global = true, default_value = "plus", value_parser = parse_sign)]
    pub sign: Sign,
    /// Truncation size N.
    #[arg(long, global = true, default_value_t = 50)]
    pub size: usize,
    /// Comma-separated truncation sizes, increasing.
    #[arg(long, global = true, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Relative tolerance of the eigenvalue iteration, in [1e-15, 1e-6].
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Iteration cap for single eigenpairs (eigen, norms, residual).
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    /// Output file; standard output when absent.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Output format; JSON for single results and CSV for tables by default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    s.parse::<Sign>().map_err(|e| e.to_string())
}

/// Output of a command together with its exit status.
pub struct Outcome {
    pub body: String,
    pub status: u8,
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("FAREY_SPECTRUM_THREADS") else {
        return Ok(());
    };
    let threads: usize =
        raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            format!("FAREY_SPECTRUM_THREADS must be a positive integer, got {raw:?}")
        })?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_USAGE);
    }
    let result = match cli.command {
        Command::Entries => commands::entries(&cli.opts),
        Command::Eigen => commands::eigen(&cli.opts),
        Command::TruncSweep => commands::trunc_sweep(&cli.opts),
        Command::QSweep => commands::q_sweep(&cli.opts),
        Command::Norms => commands::norms(&cli.opts),
        Command::Verify => verify::run(&cli.opts),
        Command::Residual => commands::residual(&cli.opts),
    };
    let outcome = match result {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let written = match &cli.opts.output {
        Some(path) => std::fs::write(path, &outcome.body),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(outcome.body.as_bytes())
        }
    };
    if let Err(e) = written {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    match outcome.status {
        EXIT_VERIFICATION => eprintln!("verification failed"),
        EXIT_NO_CONVERGENCE => {
            eprintln!("eigenvalue iteration did not converge; results are flagged")
        }
        _ => {}
    }
    ExitCode::from(outcome.status)
}
