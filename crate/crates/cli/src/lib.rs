//! The `ckdv` command line: argument parsing and dispatch. Each subcommand
//! writes a JSON and a CSV report under `$CKDV_REPORT_DIR` and prints the
//! chosen view on stdout.

mod commands;
pub mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use report::{emit_report, report_dir, Format, Report, ReportError};
use std::ffi::OsString;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ckdv", version, about = "Coupled KdV-KdV verification and simulation workbench")]
pub struct Cli {
    /// Run the full acceptance suite; exit 0 when every criterion passes, 2 otherwise.
    #[arg(long)]
    pub selftest: bool,
    /// What to print on stdout; JSON and CSV files are always written.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Well-posedness thresholds of a named or diagonal system.
    Classify(ClassifyArgs),
    /// Characteristic quadratic, bilinear thresholds and resonance identity check for a dispersion pair.
    Resonance(ResonanceArgs),
    /// Decay-integral sweeps and coupling-supremum checks.
    VerifyQuadrature,
    /// Growth of the counterexample ratio for one box family.
    Sharpness(SharpnessArgs),
    /// Pseudospectral run from a JSON config.
    Simulate(SimulateArgs),
    /// Bilinear ratio growth on Fourier packets built from a box family.
    BilinearTest(BilinearArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemKind {
    /// Majda–Biello (needs --a2).
    Mb,
    /// Hirota–Satsuma (needs --a1, --c12).
    Hs,
    /// Gear–Grimshaw (needs --rho1, --rho2, --sigma3).
    Gg,
    /// Bona–Chen–Saut.
    Bcs,
    /// Diagonal form given by --a1, --a2 and --coef.
    Diagonal,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, value_enum)]
    pub system: Option<SystemKind>,
    /// JSON system document, instead of --system.
    #[arg(long, conflicts_with = "system")]
    pub config: Option<PathBuf>,
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub a1: Option<f64>,
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub a2: Option<f64>,
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub c12: Option<f64>,
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub rho1: Option<f64>,
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub rho2: Option<f64>,
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub sigma1: Option<f64>,
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub sigma2: Option<f64>,
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub sigma3: Option<f64>,
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub sigma4: Option<f64>,
    /// Diagonal coefficient as NAME=VALUE, e.g. `--coef d11=1/2`; repeatable.
    #[arg(long = "coef", value_parser = coefficient, allow_hyphen_values = true)]
    pub coefs: Vec<(String, f64)>,
    /// Relative tolerance for region boundaries and diagonalization.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ResonanceArgs {
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "1")]
    pub a1: f64,
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    pub a2: f64,
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "0")]
    pub b1: f64,
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "0")]
    pub b2: f64,
    /// Random convolution points for the identity check.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SharpnessArgs {
    /// Family name, e.g. claim-a, claim-b, case3-thm-a, d1-neg, nd1-quarter.
    #[arg(long = "case")]
    pub family: ckdv_core::FamilyTag,
    #[arg(long, value_parser = exact, allow_hyphen_values = true)]
    pub s: ckdv_core::Rational64,
    #[arg(long, value_parser = exact, allow_hyphen_values = true)]
    pub b: ckdv_core::Rational64,
    /// Comma-separated N values; defaults to 2^4 .. 2^12.
    #[arg(long, value_delimiter = ',')]
    pub ns: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct BilinearArgs {
    #[arg(long = "case", default_value = "claim-a")]
    pub family: ckdv_core::FamilyTag,
    #[arg(long, value_parser = exact, allow_hyphen_values = true)]
    pub s: ckdv_core::Rational64,
    #[arg(long, value_parser = exact, allow_hyphen_values = true)]
    pub b: ckdv_core::Rational64,
    /// Comma-separated N values; defaults to seven geometric points in [16, 128].
    #[arg(long, value_delimiter = ',')]
    pub ns: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Fail with exit 2 when a relative energy drift exceeds this.
    #[arg(long)]
    pub max_drift: Option<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ckdv_core::Error),
    #[error(transparent)]
    Report(#[from] ReportError),
}

/// A finished command: its report and whether every check in it passed.
pub struct Outcome {
    pub report: Report,
    pub pass: bool,
}

fn number(text: &str) -> Result<f64, String> {
    ckdv_core::rational::parse(text)
        .map(ckdv_core::rational::to_f64)
        .or_else(|_| text.trim().parse::<f64>().map_err(|_| format!("not a number: `{text}`")))
}

fn exact(text: &str) -> Result<ckdv_core::Rational64, String> {
    ckdv_core::rational::parse(text).map_err(|e| e.to_string())
}

fn coefficient(text: &str) -> Result<(String, f64), String> {
    let (name, value) = text.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{text}`"))?;
    Ok((name.trim().to_string(), number(value)?))
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("ckdv: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let outcome = match (&cli.command, cli.selftest) {
        (Some(_), true) => return Err(CliError::Usage("--selftest takes no subcommand".into())),
        (None, true) => commands::selftest(),
        (None, false) => return Err(CliError::Usage("no subcommand given; see `ckdv --help`".into())),
        (Some(Command::Classify(a)), _) => commands::classify(a)?,
        (Some(Command::Resonance(a)), _) => commands::resonance(a)?,
        (Some(Command::VerifyQuadrature), _) => commands::verify_quadrature()?,
        (Some(Command::Sharpness(a)), _) => commands::sharpness(a)?,
        (Some(Command::Simulate(a)), _) => commands::simulate(a)?,
        (Some(Command::BilinearTest(a)), _) => commands::bilinear_test(a)?,
    };
    let (_, shown) = emit_report(&outcome.report, &report_dir(), cli.format)?;
    print!("{shown}");
    Ok(if outcome.pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}
