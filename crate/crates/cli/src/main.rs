//! `ucsb`: certify frequency bounds for union-closed families and run the
//! supporting checks, writing versioned JSON/CSV reports.
//!
//! Exit codes: 0 success, 1 computation or verification failure, 2 usage
//! error.

mod bound;
mod lab_cmd;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use output::Run;

#[derive(Debug, Parser)]
#[command(name = "ucsb", version, about)]
struct Cli {
    /// Leave timestamps and wall times out of every output.
    #[arg(long, global = true)]
    no_timestamps: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lower bound on the sup-inf ratio at a given t.
    GammaHat(bound::GammaHatArgs),
    /// Largest t the bound certifies, by bisection.
    Tmax(bound::TmaxArgs),
    /// Reproduce the reference evaluation at alpha = 0.035, t = 0.38234.
    VerifyPaper(bound::VerifyArgs),
    /// Enumerate or sample OR-closed families of {0,1}^n.
    Enumerate(lab_cmd::EnumerateArgs),
    /// Maximal correlation of a finite joint distribution.
    Maxcorr(lab_cmd::MaxcorrArgs),
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(String),
    Compute(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Compute(e.into())
    }
}

pub type Outcome = Result<(), CliError>;

pub fn usage(msg: String) -> CliError {
    CliError::Usage(msg)
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("UCSB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("UCSB_THREADS = {v:?} must be a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Compute(e.into()))
}

fn dispatch(cli: &Cli) -> Outcome {
    configure_threads()?;
    let stamps = !cli.no_timestamps;
    match &cli.command {
        Command::GammaHat(a) => bound::run_gamma_hat(a, Run::start("gamma-hat", a, stamps)?),
        Command::Tmax(a) => bound::run_tmax(a, Run::start("tmax", a, stamps)?),
        Command::VerifyPaper(a) => bound::run_verify(a, Run::start("verify-paper", a, stamps)?),
        Command::Enumerate(a) => lab_cmd::run_enumerate(a, Run::start("enumerate", a, stamps)?),
        Command::Maxcorr(a) => lab_cmd::run_maxcorr(a, Run::start("maxcorr", a, stamps)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Compute(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
