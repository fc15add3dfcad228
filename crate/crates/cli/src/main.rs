//! `szegokit` — batch front end for the szegokit library.
//!
//! Every subcommand reads JSON inputs (kernels, parameter fields, tree
//! fields), runs one pipeline, and writes JSON/CSV artifacts either to
//! `--out DIR` or to stdout. Runs are deterministic: identical arguments
//! (including `--seed` where randomness is involved) produce byte-identical
//! outputs.
//!
//! Exit codes: `0` success, `2` validation failure (malformed arguments or
//! input files), `3` numerical failure (a section that is not strictly
//! positive, a square root that does not exist in the chosen arithmetic, or
//! a self-check exceeding `--tol`). Failures print a single-line JSON object
//! `{"error":{"kind":...,"message":...}}` on stderr.

mod demo;
mod output;
mod pipeline;

use clap::{Args, Parser, Subcommand, ValueEnum};
use output::Emitter;
use std::path::PathBuf;
use std::process::ExitCode;

/// Arithmetic backend selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Precision {
    /// Double-precision complex arithmetic.
    #[value(name = "float64")]
    Float64,
    /// Exact rational arithmetic (real-only; square roots must exist
    /// exactly, otherwise the run fails with exit code 3).
    #[value(name = "rational")]
    Rational,
}

#[derive(Parser)]
#[command(
    name = "szegokit",
    version,
    about = "Transforms between moment kernels and Schur-type parameter fields, \
             with polynomial tables, lattice expansions, spectral factors, and \
             limit reports"
)]
pub struct Cli {
    /// Arithmetic backend.
    #[arg(long, global = true, value_enum, default_value_t = Precision::Float64)]
    pub precision: Precision,

    /// Output directory for artifacts (created if missing). Without it the
    /// primary artifact streams to stdout.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Tolerance for built-in self-checks. Defaults to 1e-8 under
    /// `--precision float64` and 1e-10 under `--precision rational`.
    #[arg(long, global = true, value_name = "REAL")]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Read a kernel JSON file and write its parameter field (gamma.json).
    Extract(ExtractArgs),
    /// Read a parameter-field JSON file and write the reconstructed kernel
    /// (kernel.json).
    Reconstruct(ReconstructArgs),
    /// Tabulate orthonormal polynomial coefficients for a parameter field
    /// (polys.csv).
    Polys(PolysArgs),
    /// Expand one normalized moment into its signed lattice terms and check
    /// the count against the Catalan number.
    Lattice(LatticeArgs),
    /// Factor a kernel as the square of a lower triangular array
    /// (theta.csv + stabilization.json).
    Factor(FactorArgs),
    /// First and strong limit sequences of a parameter field (limits.csv).
    Limits(LimitsArgs),
    /// Word-indexed pipeline: stationarity checks and the limit report for
    /// a tree parameter field (nc_report.json).
    Tree(TreeArgs),
    /// Built-in worked examples with self-checks.
    Demo(DemoArgs),
}

#[derive(Args)]
pub struct ExtractArgs {
    /// Kernel JSON file ({"size":M,"entries":[[k,j,re,im],...]}, upper
    /// triangle only).
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
}

#[derive(Args)]
pub struct ReconstructArgs {
    /// Parameter-field JSON file ({"diag":[...],"gamma":[[k,j,re,im],...]}).
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Truncation size of the reconstructed kernel (default: the full field).
    #[arg(long, value_name = "M")]
    pub size: Option<usize>,
}

#[derive(Args)]
pub struct PolysArgs {
    /// Parameter-field JSON file.
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Highest polynomial degree to tabulate.
    #[arg(long, default_value_t = 4, value_name = "N")]
    pub degree: usize,
    /// Highest level shift to tabulate.
    #[arg(long, default_value_t = 0, value_name = "L")]
    pub levels: usize,
}

#[derive(Args)]
pub struct LatticeArgs {
    /// Base index of the moment.
    #[arg(long)]
    pub k: usize,
    /// Second index of the moment (must exceed k; the gap j-k is capped at
    /// the enumeration bound).
    #[arg(long)]
    pub j: usize,
}

#[derive(Args)]
pub struct FactorArgs {
    /// Kernel JSON file.
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Section size to factor (default: the full kernel).
    #[arg(long, value_name = "M")]
    pub size: Option<usize>,
}

#[derive(Args)]
pub struct LimitsArgs {
    /// Parameter-field JSON file.
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Row whose first-limit sequence is tabulated.
    #[arg(long, default_value_t = 0, value_name = "R")]
    pub row: usize,
    /// Horizon for the limit sequences (default: the last field index).
    #[arg(long, value_name = "Q")]
    pub horizon: Option<usize>,
}

#[derive(Args)]
pub struct TreeArgs {
    /// Tree-field JSON file ({"N":n,"gamma":[["word",re,im],...]}).
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Word-length depth of the section.
    #[arg(long, default_value_t = 3, value_name = "D")]
    pub depth: usize,
}

#[derive(Args)]
pub struct DemoArgs {
    #[command(subcommand)]
    pub which: DemoCommand,
}

#[derive(Subcommand)]
pub enum DemoCommand {
    /// Reciprocal-sum kernel s_{k,j} = 1/(k+j+1): extract the parameter
    /// field and compare it with the closed forms.
    Hilbert {
        /// Largest index of the kernel section (size = max + 1).
        #[arg(long, default_value_t = 4, value_name = "M")]
        max: usize,
    },
    /// Orthonormal polynomials of the reciprocal-sum kernel (shifted
    /// Legendre family), checked against their closed forms.
    Legendre {
        /// Highest degree to tabulate.
        #[arg(long, default_value_t = 3, value_name = "N")]
        degree: usize,
    },
    /// Constant-diagonal field with a single repeated parameter; checks
    /// shift invariance of the reconstructed kernel.
    Toeplitz {
        /// The repeated first-superdiagonal parameter (|alpha| < 1).
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Field size.
        #[arg(long, default_value_t = 8, value_name = "M")]
        size: usize,
    },
    /// Seeded random field: parameters -> kernel -> parameters, reporting
    /// both round-trip deviations against --tol.
    Roundtrip {
        /// RNG seed; the same seed reproduces the run bit-for-bit.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Field size.
        #[arg(long, default_value_t = 10, value_name = "M")]
        size: usize,
    },
}

/// Everything a command needs besides its own arguments.
pub struct Ctx {
    pub precision: Precision,
    pub tol: f64,
    pub emitter: Emitter,
}

/// Command-level failure: carries the exit-code class and the message
/// rendered as JSON on stderr.
#[derive(Debug)]
pub enum CliError {
    /// Library error; numerical variants map to exit 3, the rest to 2.
    Core(szegokit::Error),
    /// Filesystem or parse problem tied to a path.
    File { path: PathBuf, message: String },
    /// Malformed argument combination not caught by the parser.
    Invalid(String),
    /// A built-in self-check exceeded the tolerance.
    SelfCheck {
        what: &'static str,
        deviation: f64,
        tol: f64,
    },
}

pub type CliResult = Result<(), CliError>;

impl From<szegokit::Error> for CliError {
    fn from(e: szegokit::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::File { path, message } => {
                write!(f, "{}: {message}", path.display())
            }
            CliError::Invalid(message) => write!(f, "{message}"),
            CliError::SelfCheck {
                what,
                deviation,
                tol,
            } => write!(
                f,
                "self-check failed: {what} deviates by {deviation:e} (tolerance {tol:e})"
            ),
        }
    }
}

impl CliError {
    /// `"numerical"` failures exit with 3, `"validation"` failures with 2.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) if e.is_numerical() => "numerical",
            CliError::SelfCheck { .. } => "numerical",
            _ => "validation",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind() {
            "numerical" => 3,
            _ => 2,
        }
    }
}

fn report_error(kind: &str, message: &str) {
    let payload = serde_json::json!({ "error": { "kind": kind, "message": message } });
    eprintln!("{payload}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            report_error("validation", &e.to_string());
            return ExitCode::from(2);
        }
    };
    let tol = cli.tol.unwrap_or(match cli.precision {
        Precision::Float64 => 1e-8,
        Precision::Rational => 1e-10,
    });
    let ctx = Ctx {
        precision: cli.precision,
        tol,
        emitter: Emitter::new(cli.out.clone()),
    };
    let outcome = match &cli.command {
        Command::Extract(args) => pipeline::extract(&ctx, args),
        Command::Reconstruct(args) => pipeline::reconstruct(&ctx, args),
        Command::Polys(args) => pipeline::polys(&ctx, args),
        Command::Lattice(args) => pipeline::lattice(&ctx, args),
        Command::Factor(args) => pipeline::factor(&ctx, args),
        Command::Limits(args) => pipeline::limits(&ctx, args),
        Command::Tree(args) => pipeline::tree(&ctx, args),
        Command::Demo(args) => demo::run(&ctx, args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            report_error(err.kind(), &err.to_string());
            ExitCode::from(err.exit_code())
        }
    }
}
