//! `distorder`: generate, check, induce, search and audit distance-induced
//! orders, and run realizability campaigns.
//!
//! Exit codes: 0 ran to completion, 1 I/O failure, 2 usage or budget,
//! 3 unparseable or ill-shaped input, 4 degenerate configuration,
//! 5 search exhausted.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use distorder::Error;

#[derive(Parser)]
#[command(name = "distorder", version, about = "Distance-induced orders on pairs of point sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a table from the diagonal-filling construction.
    Gen {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        d: u64,
        /// Draw the free permutations from this seed instead of using the identity.
        #[arg(long, conflicts_with_all = ["choice", "all"])]
        seed: Option<u64>,
        /// JSON file holding an explicit construction choice.
        #[arg(long, conflicts_with = "all")]
        choice: Option<PathBuf>,
        /// Write every construction output, one table per line (d <= 3).
        #[arg(long)]
        all: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a table against the chain definition and the observation.
    Check { table: PathBuf },
    /// Compute the order a configuration induces.
    Induce {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = distorder::geom::DEFAULT_TOL)]
        tol: f64,
    },
    /// Search for a configuration inducing a table.
    Search {
        table: PathBuf,
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        search: SearchFlags,
        /// Realizing configuration on success, search report on exhaustion.
        #[arg(long)]
        out: PathBuf,
        /// Also write the full search report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Audit every step of the impossibility argument on a configuration.
    Audit {
        config: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, default_value_t = distorder::geom::DEFAULT_TOL)]
        tol: f64,
    },
    /// Run or resume a realizability campaign.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long, required_unless_present = "sample")]
        exhaustive: bool,
        /// Number of distinct classes to sample.
        #[arg(long, conflicts_with = "exhaustive")]
        sample: Option<usize>,
        #[arg(long)]
        store: PathBuf,
        #[command(flatten)]
        search: SearchFlags,
        /// Leave wall-clock fields at zero so stores are byte-identical.
        #[arg(long)]
        no_timing: bool,
        /// Stop after this many new records.
        #[arg(long)]
        stop_after: Option<usize>,
    },
    /// Print the size of the construction family.
    Count {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        d: u64,
    },
    /// Run the Monte Carlo suites for the lemmas and the numeric kernel.
    LemmaTest {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the full summary as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarize a campaign store.
    Summarize {
        store: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Debug)]
struct SearchFlags {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    margin: Option<f64>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Io(_) => 1,
            Error::Budget(_) | Error::InvalidParams(_) | Error::MalformedChoice(_) | Error::StoreMismatch { .. } => 2,
            Error::Shape(_)
            | Error::InvalidTable(_)
            | Error::DimensionMismatch { .. }
            | Error::CorruptRecord { .. }
            | Error::Json(_) => 3,
            Error::Degenerate(_) | Error::Ties(_) => 4,
            Error::Precondition(_) => 4,
        };
        Failure::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
