use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fuzzrate_core::membership::ParamWindow;
use fuzzrate_core::rate_engine::{RateMethod, SearchConfig};

#[derive(Debug, Parser)]
#[command(name = "fuzzrate", version, about = "Fuzzy rates of operators over membership families")]
pub struct Cli {
    /// Emit JSON instead of human-readable text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the fuzzy rate of an operator at a point.
    Rate(RateArgs),
    /// Iterate an operator and report step rates, n-step rates and bounds.
    Orbit(OrbitArgs),
    /// Search for a quasi-fixed point at one orbit step.
    Qfp(QfpArgs),
    /// Run the randomized property suite.
    Verify(VerifyArgs),
    /// Emit rate-vs-b or ratio-vs-mu data for the conic example.
    Sweep(SweepArgs),
    /// Check the values of the worked conic example.
    Example(ExampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Enum,
    Closed,
    Grid,
}

impl From<MethodArg> for RateMethod {
    fn from(m: MethodArg) -> RateMethod {
        match m {
            MethodArg::Auto => RateMethod::Auto,
            MethodArg::Enum => RateMethod::Enumerate,
            MethodArg::Closed => RateMethod::Closed,
            MethodArg::Grid => RateMethod::Grid,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Problem {
    /// Family: `conic:r=<v>[,mu=<v>]`, inline JSON, or a JSON file.
    #[arg(long, default_value = "conic:r=1")]
    pub family: String,

    /// Operator: `identity`, `diag:a,b`, `rot:<rad>`, `proj:<axis>`, inline JSON, or a JSON file.
    #[arg(long)]
    pub op: String,

    /// Point as comma-separated coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,

    /// Lower end of the initial parameter window.
    #[arg(long, default_value_t = 1e-3)]
    pub window_low: f64,

    /// Upper end of the initial parameter window.
    #[arg(long, default_value_t = 1e3)]
    pub window_high: f64,

    /// Grid points per window.
    #[arg(long, default_value_t = 1024)]
    pub resolution: usize,

    /// Bracket width at which refinement stops.
    #[arg(long, default_value_t = 1e-8)]
    pub param_tol: f64,

    /// Minimum growth per expansion that counts as divergence.
    #[arg(long, default_value_t = 10.0)]
    pub growth_factor: f64,

    #[arg(long, default_value_t = 6)]
    pub max_expansions: usize,
}

impl SearchArgs {
    pub fn config(&self) -> SearchConfig {
        SearchConfig {
            window: ParamWindow {
                low: self.window_low,
                high: self.window_high,
            },
            resolution: self.resolution,
            param_tol: self.param_tol,
            growth_factor: self.growth_factor,
            max_expansions: self.max_expansions,
            ..SearchConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[command(flatten)]
    pub problem: Problem,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub problem: Problem,
    #[command(flatten)]
    pub search: SearchArgs,

    #[arg(long, default_value_t = 8)]
    pub steps: usize,

    #[arg(long, value_enum, default_value_t = Emit::Table)]
    pub emit: Emit,

    /// Also check ‖Bᵏ‖_y ≥ delta for all k ≥ --from-step.
    #[arg(long)]
    pub delta: Option<f64>,

    #[arg(long, default_value_t = 1)]
    pub from_step: usize,

    /// Report the first step after which step rates stay within eps of 1.
    #[arg(long)]
    pub eps: Option<f64>,
}

#[derive(Debug, Args)]
pub struct QfpArgs {
    #[command(flatten)]
    pub problem: Problem,
    #[command(flatten)]
    pub search: SearchArgs,

    /// Orbit step k: compares B^k(y) with B^{k-1}(y).
    #[arg(long, default_value_t = 1)]
    pub steps: usize,

    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,

    /// Also certify B^{k-1}(y) as a fixed point.
    #[arg(long)]
    pub certify: bool,

    /// Tolerance for certification.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,

    /// Run only these properties (e.g. T34-7); repeatable.
    #[arg(long = "property")]
    pub properties: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVar {
    B,
    Mu,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub var: SweepVar,

    #[arg(long, allow_hyphen_values = true)]
    pub from: f64,

    #[arg(long, allow_hyphen_values = true)]
    pub to: f64,

    #[arg(long, default_value_t = 20)]
    pub samples: usize,

    /// Space samples logarithmically.
    #[arg(long)]
    pub log: bool,

    #[arg(long, default_value_t = 1.0)]
    pub r: f64,

    /// Fixed b for a mu sweep.
    #[arg(long, default_value_t = std::f64::consts::SQRT_2, allow_hyphen_values = true)]
    pub b: f64,

    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleMethod {
    Closed,
    Grid,
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,

    #[arg(long, value_enum, default_value_t = ExampleMethod::Closed)]
    pub method: ExampleMethod,
}
