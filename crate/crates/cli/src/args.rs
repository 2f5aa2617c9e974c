use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use keyrate::rates::OptimizerConfig;

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "keyrate", version, about = "Secret-key rate bounds for one-way QKD protocols")]
pub struct Cli {
    /// Recompute the paper's thresholds and compare them against their tolerances.
    #[arg(long)]
    pub reproduce_paper: bool,

    #[command(flatten)]
    pub common: Common,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a bound at one noise level.
    Rate(RateArgs),
    /// Bisect for the noise level where a bound stops being positive.
    Threshold(ThresholdArgs),
    /// Evaluate bounds over a noise grid.
    Sweep(SweepArgs),
    /// Dump sampled and analytic Bell spectra at one QBER.
    FeasibleSet(FeasibleArgs),
    /// Same as --reproduce-paper.
    ReproducePaper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundArg {
    Lower,
    Upper,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, default_value_t = 2006, global = true)]
    pub seed: u64,

    /// Grid points over the attack parameter.
    #[arg(long, global = true)]
    pub lambda_grid: Option<usize>,

    /// Grid points over the preprocessing flip probability.
    #[arg(long, global = true)]
    pub q_grid: Option<usize>,

    /// Golden-section bracket width.
    #[arg(long, global = true)]
    pub golden_tol: Option<f64>,

    /// Threshold bisection bracket width.
    #[arg(long, global = true)]
    pub bisection_tol: Option<f64>,
}

impl Common {
    pub fn optimizer(&self) -> OptimizerConfig {
        let d = OptimizerConfig::default();
        OptimizerConfig {
            lambda_grid: self.lambda_grid.unwrap_or(d.lambda_grid),
            q_grid: self.q_grid.unwrap_or(d.q_grid),
            golden_tol: self.golden_tol.unwrap_or(d.golden_tol),
            bisection_tol: self.bisection_tol.unwrap_or(d.bisection_tol),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ProtocolArgs {
    /// bb84, six-state or b92.
    #[arg(long)]
    pub protocol: String,

    /// B92 signal overlap <φ0|φ1> in (0, 1).
    #[arg(long)]
    pub overlap: Option<f64>,

    #[arg(long)]
    pub no_preprocessing: bool,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct NoiseArg {
    #[arg(long)]
    pub qber: Option<f64>,
    /// Depolarizing strength (B92).
    #[arg(long)]
    pub delta: Option<f64>,
}

impl NoiseArg {
    pub fn value(&self) -> f64 {
        self.qber.or(self.delta).expect("clap requires one of the two")
    }

    pub fn flag(&self) -> &'static str {
        if self.qber.is_some() {
            "--qber"
        } else {
            "--delta"
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RateArgs {
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    #[command(flatten)]
    pub noise: NoiseArg,
    #[arg(long, value_enum, default_value = "lower")]
    pub bound: BoundArg,
}

#[derive(Debug, Clone, Args)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    #[arg(long, value_enum, default_value = "lower")]
    pub bound: BoundArg,
    /// B92 without --overlap: number of arccos-overlap grid points over [π/16, 7π/16].
    #[arg(long, default_value_t = 21)]
    pub overlap_points: usize,
    /// B92: print every overlap on the grid, not only the best.
    #[arg(long)]
    pub per_overlap: bool,
    /// Lower end of the noise bracket (default 0).
    #[arg(long)]
    pub bracket_lo: Option<f64>,
    /// Upper end of the noise bracket (default 0.25 for QBER, 0.2 for δ).
    #[arg(long)]
    pub bracket_hi: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub start: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub stop: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub step: f64,
    #[arg(long, value_enum, default_value = "lower")]
    pub bound: BoundArg,
}

#[derive(Debug, Clone, Args)]
pub struct FeasibleArgs {
    #[arg(long)]
    pub protocol: String,
    #[arg(long)]
    pub overlap: Option<f64>,
    #[arg(long)]
    pub qber: f64,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Points at which the analytic family is evaluated.
    #[arg(long, default_value_t = 21)]
    pub family_points: usize,
}
