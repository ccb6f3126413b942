//! `quasilab`: spectra and densities of states of metallic-mean quasicrystal
//! models from the command line.
//!
//! Every artifact is written as CSV (default), JSON or SVG and carries the
//! full run configuration and toolkit version. Failures print a JSON error
//! object on stderr and exit with a nonzero status.

mod cache;
mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "quasilab",
    version,
    about = "Metallic-mean quasicrystal spectra and densities of states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum CommandKind {
    Sequence,
    Spectrum1d,
    Dos1d,
    Spectrum2d,
    Dos2d,
    Thickness,
    Sweep,
    Verify,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Substitution words, their lengths, parities and odd-twin witnesses.
    Sequence(RunArgs),
    /// Band cover of the 1D spectrum from trace-map escape times.
    Spectrum1d(RunArgs),
    /// Integrated density of states of a finite 1D window.
    Dos1d(RunArgs),
    /// Band cover of the Labyrinth spectrum as a product of 1D covers.
    Spectrum2d(RunArgs),
    /// Labyrinth density of states: CDF and histogram density.
    Dos2d(RunArgs),
    /// Thickness, box dimension and gaps of a 1D spectrum cover.
    Thickness(RunArgs),
    /// Interval / Cantor classification over a grid of coupling pairs.
    Sweep(RunArgs),
    /// Run the acceptance suite and print a pass/fail table.
    Verify(RunArgs),
}

impl Command {
    fn split(self) -> (CommandKind, RunArgs) {
        match self {
            Command::Sequence(a) => (CommandKind::Sequence, a),
            Command::Spectrum1d(a) => (CommandKind::Spectrum1d, a),
            Command::Dos1d(a) => (CommandKind::Dos1d, a),
            Command::Spectrum2d(a) => (CommandKind::Spectrum2d, a),
            Command::Dos2d(a) => (CommandKind::Dos2d, a),
            Command::Thickness(a) => (CommandKind::Thickness, a),
            Command::Sweep(a) => (CommandKind::Sweep, a),
            Command::Verify(a) => (CommandKind::Verify, a),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
    Svg,
    /// Plain text; only `verify` supports it.
    Text,
}

/// Options shared by all subcommands; each uses the ones it needs.
#[derive(Args, Debug, Clone, Serialize)]
#[command(group(ArgGroup::new("coupling1").args(["a", "lambda"])))]
#[command(group(ArgGroup::new("coupling2").args(["a2", "lambda2"])))]
struct RunArgs {
    /// Substitution order (1 golden, 2 silver, 3 bronze, ...).
    #[arg(long, default_value_t = 1)]
    s: u32,
    /// Hopping on letter a (b is 1).
    #[arg(long)]
    a: Option<f64>,
    /// Coupling constant |a^2 - 1| / a; converted to a >= 1.
    #[arg(long)]
    lambda: Option<f64>,
    /// Hopping of the second axis (2D commands; defaults to the first).
    #[arg(long)]
    a2: Option<f64>,
    /// Coupling of the second axis (2D commands).
    #[arg(long)]
    lambda2: Option<f64>,
    /// Window length / box side.
    #[arg(long = "N", default_value_t = 1024)]
    #[serde(rename = "N")]
    n: usize,
    /// Trace-map depth of spectrum covers; iterate index for `sequence`.
    #[arg(long, default_value_t = 15)]
    level: usize,
    /// Band-edge resolution of spectrum covers.
    #[arg(long, default_value_t = 1e-4)]
    resolution: f64,
    /// Steps for the zero-energy orbit check reported with spectra.
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
    /// Escape radius (default 3 + lambda).
    #[arg(long)]
    escape_radius: Option<f64>,
    /// Output format (default csv; text for verify).
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file (default stdout).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Seed for sampled quantities.
    #[arg(long, default_value_t = 0x5eed_1a6e)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Energy grid points for density curves.
    #[arg(long, default_value_t = 401)]
    points: usize,
    /// Window starts this many letters into the fixed point.
    #[arg(long, default_value_t = 0)]
    offset: usize,
    /// Use the rotation sequence with this phase instead of the fixed point.
    #[arg(long)]
    beta: Option<f64>,
    /// Histogram bins for `dos2d`.
    #[arg(long, default_value_t = 200)]
    bins: usize,
    /// Comma-separated couplings for `sweep`.
    #[arg(long, default_value = "0.05,0.1,0.2,0.5,1,2,3.75")]
    lambdas: String,
}

/// Error printed as JSON on stderr.
#[derive(Serialize)]
struct ErrorReport<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

fn fail(kind: &str, message: String) -> ExitCode {
    let report = ErrorReport {
        error: ErrorBody { kind, message },
    };
    eprintln!("{}", serde_json::to_string(&report).expect("error report serializes"));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            return fail("usage", e.render().to_string().trim().to_string());
        }
    };
    let (kind, args) = cli.command.split();
    if let Some(t) = args.threads {
        if t == 0 {
            return fail("domain", "--threads must be >= 1".into());
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            return fail("io", e.to_string());
        }
    }
    let out = match commands::run(kind, &args) {
        Ok(o) => o,
        Err(e) => return fail(e.kind(), e.to_string()),
    };
    let written = match &args.output {
        Some(path) => std::fs::write(path, out.text.as_bytes()),
        None => std::io::stdout().lock().write_all(out.text.as_bytes()),
    };
    if let Err(e) = written {
        return fail("io", e.to_string());
    }
    if out.success {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
