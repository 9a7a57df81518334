//! `su4euler`: SU(4) Euler angles, Haar measure and two-qubit separability.
//!
//! Exit status: 0 success, 1 I/O failure, 2 usage error, 3 input that is not
//! a valid density matrix, 4 internal consistency failure.

mod commands;
mod expr;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use su4euler::{Group, RangeKind, Subsystem};

#[derive(Debug, Parser)]
#[command(name = "su4euler", version, about, long_about = None)]
struct Cli {
    /// Worker threads for scans and Monte Carlo (default: all cores).
    #[arg(long, global = true, env = "SU4EULER_THREADS")]
    threads: Option<usize>,

    /// Report elapsed wall time on stderr.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print Gell-Mann generators or the nonzero structure constants.
    Basis(BasisArgs),
    /// Build U(α) from Euler angles.
    Compose(ComposeArgs),
    /// Closed-form Haar density and the one-form determinant at a point.
    Haar(HaarArgs),
    /// Group volume by product quadrature or Monte Carlo.
    Volume(VolumeArgs),
    /// Build ρ from twelve or fifteen angles and three spectrum angles.
    Rho(RhoArgs),
    /// Partial-transpose entanglement test for one state.
    Check(CheckArgs),
    /// Classify many states and stream one record per state.
    Scan(ScanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupArg {
    Su2,
    Su3,
    Su4,
}

impl From<GroupArg> for Group {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::Su2 => Group::Su2,
            GroupArg::Su3 => Group::Su3,
            GroupArg::Su4 => Group::Su4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProfileArg {
    Volume,
    Covering,
}

impl From<ProfileArg> for RangeKind {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::Volume => RangeKind::Volume,
            ProfileArg::Covering => RangeKind::Covering,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    #[value(alias = "quadrature")]
    Quad,
    #[value(alias = "monte-carlo")]
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SubsystemArg {
    A,
    B,
}

impl From<SubsystemArg> for Subsystem {
    fn from(s: SubsystemArg) -> Self {
        match s {
            SubsystemArg::A => Subsystem::A,
            SubsystemArg::B => Subsystem::B,
        }
    }
}

/// Positive integer counts, also accepting `1e6`-style input.
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a count"))?;
    if x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 {
        Ok(x as u64)
    } else {
        Err(format!("`{s}` is not a whole nonnegative count"))
    }
}

fn parse_real(s: &str) -> Result<f64, String> {
    expr::parse(s)
}

#[derive(Debug, Args)]
struct BasisArgs {
    /// Generator index 1..15; all generators when omitted.
    #[arg(long)]
    index: Option<usize>,
    /// List nonzero f_ijk with i < j < k instead of matrices.
    #[arg(long, conflicts_with = "index")]
    structure: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct AnglesArg {
    /// Comma-separated angles in radians; `pi` arithmetic allowed (`pi/4`).
    #[arg(long, allow_hyphen_values = true)]
    angles: String,
}

#[derive(Debug, Args)]
struct ComposeArgs {
    #[arg(long, value_enum, default_value_t = GroupArg::Su4)]
    group: GroupArg,
    #[command(flatten)]
    angles: AnglesArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct HaarArgs {
    #[arg(long, value_enum, default_value_t = GroupArg::Su4)]
    group: GroupArg,
    #[command(flatten)]
    angles: AnglesArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct VolumeArgs {
    #[arg(long, value_enum, default_value_t = GroupArg::Su4)]
    group: GroupArg,
    #[arg(long, value_enum, default_value_t = MethodArg::Quad)]
    method: MethodArg,
    /// Gauss–Legendre nodes per non-uniform axis.
    #[arg(long, default_value = "64", value_parser = parse_count)]
    nodes: u64,
    /// Monte Carlo sample count.
    #[arg(long, default_value = "1e5", value_parser = parse_count)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ProfileArg::Volume)]
    profile: ProfileArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct StateArgs {
    /// Twelve conjugation angles, or all fifteen Euler angles.
    #[arg(long, allow_hyphen_values = true)]
    angles: Option<String>,
    /// θ₁,θ₂,θ₃, or `lower` / `upper` for the profile corners.
    #[arg(long, default_value = "lower", allow_hyphen_values = true)]
    theta: String,
}

#[derive(Debug, Args)]
struct RhoArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Plain-text matrix: 4 rows of 8 reals (re im re im …).
    #[arg(long, conflicts_with = "angles")]
    matrix: Option<PathBuf>,
    #[arg(long, default_value = "1e-10", value_parser = parse_real)]
    tolerance: f64,
    #[arg(long, value_enum, default_value_t = SubsystemArg::B)]
    subsystem: SubsystemArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, default_value = "1000", value_parser = parse_count)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "1e-10", value_parser = parse_real)]
    tolerance: f64,
    /// Visit all 2¹⁵ endpoint combinations instead of random states.
    #[arg(long)]
    corners: bool,
    /// Fixed θ₁,θ₂,θ₃ (or `lower`/`upper`); uniform over the profile when omitted.
    #[arg(long, conflicts_with = "corners", allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long, value_enum, default_value_t = ProfileArg::Volume)]
    profile: ProfileArg,
    #[arg(long, value_enum, default_value_t = SubsystemArg::B)]
    subsystem: SubsystemArg,
    /// Write records here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

/// Failure with its exit status.
#[derive(Debug)]
pub enum Failure {
    Io(String),
    Usage(String),
    Validation(String),
    Consistency(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Validation(_) => 3,
            Failure::Consistency(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m)
            | Failure::Usage(m)
            | Failure::Validation(m)
            | Failure::Consistency(m) => m,
        }
    }
}

impl From<su4euler::Error> for Failure {
    fn from(e: su4euler::Error) -> Self {
        match e {
            su4euler::Error::Argument(_) => Failure::Usage(e.to_string()),
            su4euler::Error::InvalidDensity { .. } => Failure::Validation(e.to_string()),
            su4euler::Error::Consistency(_) => Failure::Consistency(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let timing = cli.timing;
    let result = su4euler::rng::with_threads(cli.threads, move || commands::run(cli.command));
    if timing {
        eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
