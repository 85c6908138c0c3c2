use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "stickslip", about = "Escape times and occupation probabilities near smoothed switching surfaces")]
#[command(args_override_self = true)]
pub struct Cli {
    /// Flat `key = value` file; keys are long flag names, flags on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the switching surface from the two normal drifts.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        a_minus: f64,
        #[arg(long, allow_hyphen_values = true)]
        a_plus: f64,
    },
    /// Exact and asymptotic mean escape time of a crossing configuration.
    Escape {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, conflicts_with = "asym_only")]
        exact_only: bool,
        #[arg(long)]
        asym_only: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Stationary occupation probability of the layer on an attracting surface.
    Occupancy {
        #[command(flatten)]
        system: SystemArgs,
        /// Emit the tabulated stationary density instead of the summary row.
        #[arg(long)]
        density: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Monte-Carlo estimate with the matching analytic value.
    Mc {
        #[arg(long, value_enum)]
        mode: McMode,
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, default_value_t = 10_000)]
        paths: usize,
        /// Scaled time step; default `min(0.01, 0.01 κ̃²)`.
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Scaled censoring horizon; default `100 r̃/|a⁺|` (escape) or burn-in + 50 (occupancy).
        #[arg(long)]
        t_max: Option<f64>,
        /// Scaled burn-in for occupancy; default `10 κ̃²`.
        #[arg(long)]
        t_burn: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Escape-time scan of the friction oscillator over a (z₀, κ) grid.
    FrictionScan {
        #[arg(long, default_value_t = 3.0)]
        mu: f64,
        /// Comma-separated noise amplitudes.
        #[arg(long, value_delimiter = ',', default_value = "0.01,0.02,0.05,0.1")]
        kappa: Vec<f64>,
        #[arg(long, default_value_t = -1.5, allow_hyphen_values = true)]
        z0_min: f64,
        #[arg(long, default_value_t = -0.05, allow_hyphen_values = true)]
        z0_max: f64,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.1)]
        r: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Print the tool version.
    Version,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum McMode {
    Escape,
    Occupancy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetArg {
    CubicFriction,
    Linear,
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    /// Named layer model; without it, --a-minus/--a-plus and optionally --A-poly.
    #[arg(long, value_enum)]
    pub preset: Option<PresetArg>,
    /// Spring extension (cubic-friction).
    #[arg(long, allow_hyphen_values = true)]
    pub z0: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 3.0)]
    pub mu: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub a_minus: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a_plus: Option<f64>,
    /// Ascending coefficients of A(s), s ∈ [−1, 1], comma-separated.
    #[arg(long = "A-poly", value_delimiter = ',', allow_hyphen_values = true)]
    pub a_poly: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.05)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0.1)]
    pub r: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Write CSV here instead of stdout; a `.manifest` file is written alongside.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}
