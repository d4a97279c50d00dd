//! `ces`: construct and verify completely and perfectly entangled subspaces.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 I/O error,
//! 3 verification failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Failure;

#[derive(Debug, Parser)]
#[command(name = "ces", version, about = "Completely and perfectly entangled subspaces")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Where to write the command's JSON artifact.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print JSON on stdout instead of a human-readable summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Record wall-clock time in reports (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LambdaChoice {
    Roots,
    Chebyshev,
    Jittered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeChoice {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the maximal completely entangled subspace for the given local dimensions.
    Construct {
        /// Comma-separated local dimensions, e.g. 3,3.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, value_enum, default_value_t = LambdaChoice::Roots)]
        lambdas: LambdaChoice,
    },
    /// Write the closed-form orthonormal basis for C^n ⊗ C^n.
    Basis {
        #[arg(long)]
        n: usize,
    },
    /// Search a subspace file for product vectors.
    Search {
        path: PathBuf,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = 5000)]
        max_iters: usize,
        /// Decision tolerance: a product vector is reported when the overlap exceeds 1 - tol.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Build and verify the five-party stabilizer code over a finite abelian group.
    Stabilizer {
        /// Z2, Z3, Z4 or Z2xZ2.
        #[arg(long, default_value = "Z2")]
        group: String,
        /// Defaults to exhaustive for order 2 and sampled otherwise.
        #[arg(long, value_enum)]
        mode: Option<ModeChoice>,
        /// Random unit vectors of the range to test.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Random basis pairs (a, b) to test in sampled mode.
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
    },
    /// Run a standard set of verifications and write every report into --out.
    ReportBundle,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let g = &cli.global;
    let result = match cli.command {
        Command::Construct { dims, lambdas } => commands::construct(g, &dims, lambdas),
        Command::Basis { n } => commands::basis(g, n),
        Command::Search { path, restarts, max_iters, tol } => commands::search(g, &path, restarts, max_iters, tol),
        Command::Stabilizer { group, mode, samples, pairs } => commands::stabilizer(g, &group, mode, samples, pairs),
        Command::ReportBundle => commands::report_bundle(g),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Verification(m) => f.write_str(m),
        }
    }
}
