use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "nilprox", version, about = "Nilpotent approximation experiments on finite matrices")]
pub struct Cli {
    /// Halve dimension ladders and cap dimensions at 256.
    #[arg(long, global = true)]
    pub quick: bool,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certified inequalities, witness defect and spectral density of the order-n Kahan pack.
    Kahan(KahanArgs),
    /// Lower and upper bounds on the distance from a matrix to the nilpotents.
    Distance(DistanceArgs),
    /// Box plan and normal/nilpotent pair for a spectrum at resolution eps.
    Boxes(BoxesArgs),
    /// Polar-grid spectrum and its covering radius in the unit disk.
    Polar(PolarArgs),
    /// Tower of normal matrices along a UHF dimension chain.
    Tower(TowerArgs),
    /// Finite-dimensional obstructions.
    #[command(subcommand)]
    Obstruct(ObstructCommand),
    /// Truncated tensor families with positive or nilpotent tails.
    Tensor(TensorArgs),
    /// Acceptance suite.
    Regress(RegressArgs),
}

#[derive(Debug, Args)]
pub struct KahanArgs {
    #[arg(long)]
    pub n: usize,
    /// Density resolution.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 500)]
    pub iters: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoxesArgs {
    /// JSON list of [re, im, multiplicity].
    #[arg(long)]
    pub spectrum: PathBuf,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub ell: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PolarArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub m: u64,
    #[arg(long, default_value_t = 0)]
    pub q: u64,
    #[arg(long, default_value_t = 0.01)]
    pub grid_step: f64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TowerArgs {
    #[arg(long)]
    pub l1: u64,
    /// Comma-separated ratios such as 2x2,2x3.
    #[arg(long, default_value = "")]
    pub ratios: String,
    #[arg(long, default_value_t = 0.01)]
    pub grid_step: f64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ObstructCommand {
    /// Trace bound along a grid of scalar shifts.
    Scan {
        #[arg(long)]
        matrix: PathBuf,
        /// re_min,re_max,im_min,im_max,n
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Dyadic diagonal example of order 2^n.
    Dyadic {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Greedy diagonal sequence with a tolerance schedule.
    Sequence {
        #[arg(long)]
        levels: usize,
        /// Comma-separated nonincreasing tolerances.
        #[arg(long)]
        schedule: String,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct TensorArgs {
    /// JSON with "stem" (.cmat paths), "tail" (tail_A or tail_M) and "dims".
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long = "K")]
    pub k: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RegressArgs {
    /// Comma-separated criterion names or numbers, or "all".
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long)]
    pub report: Option<PathBuf>,
}
