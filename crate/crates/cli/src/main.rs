use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Rankin-Selberg coefficient streams, invariant checks and prime sums in
/// arithmetic progressions.
#[derive(Debug, Parser)]
#[command(name = "rankin", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for the parallel stages.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Tolerance of the verification suites.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Export lambda(n) and Lambda(n) of a pair for n <= limit.
    Coeffs(commands::CoeffsArgs),
    /// Run the invariant suites and report pass/fail with margins.
    Verify(commands::VerifyArgs),
    /// Prime sums in progressions against their main terms.
    Sw(commands::SwArgs),
    /// Demo: |L| near 1 on the convergent side for quadratic twists.
    SiegelTrend(commands::SiegelArgs),
    /// Write the local parameters of a representation as a table file.
    Satake(commands::SatakeArgs),
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    VerificationFailed,
    Core(rankin_core::Error),
}

impl From<rankin_core::Error> for CliError {
    fn from(e: rankin_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Core(e.into())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Core(rankin_core::Error::Io(e.to_string()))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Core(rankin_core::Error::Io(e.to_string()))
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use rankin_core::Error as E;
        match self {
            CliError::VerificationFailed => 1,
            CliError::Usage(_) => 2,
            CliError::Core(E::InsufficientData { .. } | E::InsufficientLimit(_)) => 3,
            CliError::Core(_) => 2,
        }
    }
}

impl Common {
    fn validate(&self) -> Result<(), CliError> {
        if let Some(n) = self.threads {
            if n == 0 {
                return Err(CliError::Usage("--threads must be at least 1".into()));
            }
        }
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Usage(format!("--tol must be positive and finite, got {t}")));
            }
        }
        Ok(())
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    /// The output sink; created only after validation succeeded.
    pub fn sink(&self) -> Result<Box<dyn Write>, CliError> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    cli.common.validate()?;
    if let Some(n) = cli.common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match &cli.command {
        Command::Coeffs(args) => commands::coeffs(args, &cli.common),
        Command::Verify(args) => commands::verify(args, &cli.common),
        Command::Sw(args) => commands::sw(args, &cli.common),
        Command::SiegelTrend(args) => commands::siegel_trend(args, &cli.common),
        Command::Satake(args) => commands::satake(args, &cli.common),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(msg) => eprintln!("error: {msg}"),
                CliError::VerificationFailed => eprintln!("verification failed"),
                CliError::Core(err) => eprintln!("error: {err}"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
