//! Command-line front end: argument definitions and command dispatch.

mod commands;
mod error;

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use swallowtail_core::catastrophe::Axis;

pub use error::{CliError, CliResult};

pub const L1_JSON: &str = include_str!("../configs/l1.json");
pub const L2_JSON: &str = include_str!("../configs/l2.json");

#[derive(Debug, Parser)]
#[command(
    name = "swallowtail",
    version,
    about = "Swallowtail degeneracy analysis of two-mode bosonic dynamical matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the main output here instead of stdout.
    #[arg(long, global = true, help_heading = "Global options")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, help_heading = "Global options", value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Multiplier for the classification zero thresholds.
    #[arg(
        long,
        global = true,
        help_heading = "Global options",
        default_value_t = 1.0
    )]
    pub tol_scale: f64,

    /// Worker threads for sweeps, scans and root solving.
    #[arg(long, global = true, help_heading = "Global options")]
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a control point `(q, r, s)` or a parameter set.
    Classify(ClassifyArgs),
    /// Roots and classes over an `(r, s)` grid at fixed `q`.
    Sweep(SweepArgs),
    /// Track eigenvalues around a loop and extract the braid word.
    Braid(BraidArgs),
    /// Sample points of the swallowtail surface.
    Surface(SurfaceArgs),
    /// Symmetry residuals and map consistency for a parameter set.
    Check(ParamArgs),
}

/// `MIN:MAX:N`
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisArg(pub Axis);

impl FromStr for AxisArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, n] = parts[..] else {
            return Err(format!("expected MIN:MAX:N, got `{s}`"));
        };
        let min: f64 = min.parse().map_err(|e| format!("bad MIN `{min}`: {e}"))?;
        let max: f64 = max.parse().map_err(|e| format!("bad MAX `{max}`: {e}"))?;
        let n: usize = n.parse().map_err(|e| format!("bad N `{n}`: {e}"))?;
        Axis::new(min, max, n)
            .map(AxisArg)
            .map_err(|e| e.to_string())
    }
}

/// Model parameters from a JSON file and/or individual flags; flags win.
#[derive(Debug, Default, Args)]
pub struct ParamArgs {
    /// JSON file with any of the parameter fields.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta_omega_1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta_omega_2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub phi_g: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub xi_1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub phi_1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub xi_2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub phi_2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub chi: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub phi_chi: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma_1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma_2: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub q: f64,
    /// `MIN:MAX:N`
    #[arg(long, allow_hyphen_values = true)]
    pub r: AxisArg,
    /// `MIN:MAX:N`
    #[arg(long, allow_hyphen_values = true)]
    pub s: AxisArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    L1,
    L2,
}

#[derive(Debug, Args)]
pub struct BraidArgs {
    /// JSON loop specification.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    pub config: Option<PathBuf>,
    /// Bundled loop specification.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long)]
    pub n_samples: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta_omega_2: Option<f64>,
    /// Also write the strands as CSV here.
    #[arg(long)]
    pub strands: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SurfaceMode {
    DoubleReal,
    DoubleComplex,
    GZeroDiabolical,
    GOffsetExceptional,
    Implicit,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    #[arg(long, value_enum)]
    pub mode: SurfaceMode,
    /// First parametric axis, `MIN:MAX:N`.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<AxisArg>,
    /// Second parametric axis, `MIN:MAX:N`.
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<AxisArg>,
    /// Implicit-mode axes, `MIN:MAX:N`.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<AxisArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<AxisArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<AxisArg>,
    /// Samples per axis for axes left at their defaults.
    #[arg(long, default_value_t = 100)]
    pub resolution: usize,
}

/// Runs the command and returns the main output.
pub fn run(cli: &Cli) -> CliResult<String> {
    if !(cli.tol_scale.is_finite() && cli.tol_scale > 0.0) {
        return Err(CliError::Usage(format!(
            "--tol-scale must be positive and finite, got {}",
            cli.tol_scale
        )));
    }
    match &cli.command {
        Command::Classify(a) => commands::classify(a, cli),
        Command::Sweep(a) => commands::sweep(a, cli),
        Command::Braid(a) => commands::braid(a, cli),
        Command::Surface(a) => commands::surface(a, cli),
        Command::Check(a) => commands::check(a, cli),
    }
}
