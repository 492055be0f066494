//! `qring`: spectra of the ring momentum operator from the command line.
//!
//! Data goes to stdout (or `--out`), diagnostics to stderr. The exit code is
//! nonzero when any residual, classification or gauge-invariance contract is
//! missed.

mod commands;
mod format;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qring::SignConvention;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "qring",
    version,
    about = "Momentum spectra on a discretized quantum ring"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep the seam twist over [0, π] and classify every eigenvalue.
    #[command(name = "figure-b1")]
    FigureB1(SweepArgs),
    /// Diagonalize a single (optionally gauged) operator.
    Spectrum(SpectrumArgs),
    /// Compare spectra with and without a gauge transformation.
    #[command(name = "gauge-check")]
    GaugeCheck(SpectrumArgs),
    /// Admissibility and seam periodicity of a superposition.
    Superpose(SuperposeArgs),
    /// Energy bands (q+n)² and the degenerate transition.
    Bands(BandsArgs),
    /// Flux-shifted momentum eigenvalues n + eΦ/(2πr).
    Flux(FluxArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SignArg {
    Figureb1,
    Paperliteral,
}

impl From<SignArg> for SignConvention {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Figureb1 => SignConvention::FigureB1,
            SignArg::Paperliteral => SignConvention::PaperLiteral,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Output {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
    /// Write data here instead of stdout.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OperatorArgs {
    /// Number of grid points.
    #[arg(long, default_value_t = 20)]
    pub r: usize,
    #[arg(long, value_enum, default_value = "figureb1")]
    pub sign: SignArg,
    /// Eigensolver tolerance relative to the Frobenius norm.
    #[arg(long, default_value_t = qring::DEFAULT_TOL)]
    pub tol: f64,
    /// Largest accepted gap between a numeric and an analytic eigenvalue.
    #[arg(long, default_value_t = 1e-9)]
    pub match_tol: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub op: OperatorArgs,
    /// Number of evenly spaced Δα values in [0, π], endpoints included.
    #[arg(long, default_value_t = 11)]
    pub steps: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub op: OperatorArgs,
    /// Seam twist Δα in radians.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub delta_alpha: f64,
    /// Gauge: zero | linear:<s> | sin:<a>:<h>, terms joined by '+'.
    #[arg(long, default_value = "zero")]
    pub gauge: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SuperposeArgs {
    /// Band offset q.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub q: f64,
    /// Modes as "n[:re[:im]],..."; missing coefficient parts default to 1 and 0.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BandsArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub q: f64,
    /// Inclusive integer range "a..b".
    #[arg(long, default_value = "-3..3", allow_hyphen_values = true)]
    pub n_range: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FluxArgs {
    #[arg(long, default_value = "-3..3", allow_hyphen_values = true)]
    pub n_range: String,
    /// Particle charge (C). Natural units: leave at 1 and pass the phase e·Φ as --flux.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub charge: f64,
    /// Flux through the ring (Wb).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub flux: f64,
    /// Ring radius (m).
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Gauge partition parameter in [0, 1]; does not affect the eigenvalue.
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: Output,
}

/// Finished command: the data payload plus whether every contract held.
pub struct Report {
    pub data: String,
    pub ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, out) = match &cli.command {
        Command::FigureB1(a) => (commands::figure_b1(a), a.output.out.clone()),
        Command::Spectrum(a) => (commands::spectrum(a), a.output.out.clone()),
        Command::GaugeCheck(a) => (commands::gauge_check(a), a.output.out.clone()),
        Command::Superpose(a) => (commands::superpose(a), a.output.out.clone()),
        Command::Bands(a) => (commands::bands(a), a.output.out.clone()),
        Command::Flux(a) => (commands::flux(a), a.output.out.clone()),
    };
    let report = match result {
        Ok(report) => report,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::from(2);
        }
    };
    let written = match out {
        Some(path) => fs::write(&path, &report.data)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(report.data.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(err) = written {
        eprintln!("error: {err}");
        return ExitCode::from(2);
    }
    if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
