use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rrw_core::bounds::{linspace, logspace};
use rrw_core::verify::Suite;

use crate::run::CliError;

#[derive(Debug, Parser, Serialize)]
#[command(name = "rrw", version, about = "Regularised random walk verification and percolation experiments")]
pub struct Cli {
    /// Directory for CSV, JSON and manifest files.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    /// Worker threads; 0 lets the pool decide.
    #[arg(long, global = true, env = "RRW_THREADS", default_value_t = 0)]
    pub threads: usize,

    /// Run every sample loop on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Run an inequality suite over random and exhaustive corpora.
    Verify(VerifyArgs),
    /// Monte Carlo annealed return experiments.
    Percolate(PercolateArgs),
    /// Empirical integrated density of states against the Lifshitz bound.
    Ids(IdsArgs),
    /// Evaluate a bound on a grid and write it as CSV.
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteArg {
    Interlacing,
    Laplacian,
    Trees,
    Bounds,
    Sandwich,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Interlacing => Suite::Interlacing,
            SuiteArg::Laplacian => Suite::Laplacian,
            SuiteArg::Trees => Suite::Trees,
            SuiteArg::Bounds => Suite::Bounds,
            SuiteArg::Sandwich => Suite::Sandwich,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    pub suite: SuiteArg,
    /// Random instances (random trees for the tree suites).
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Enumerate every free tree up to this order.
    #[arg(long, default_value_t = 10)]
    pub exhaustive_n: usize,
    #[arg(long, default_value_t = 400)]
    pub max_tree_order: usize,
    /// Random graphs for the intermediate-time domination check.
    #[arg(long, default_value_t = 100)]
    pub haupt_graphs: usize,
}

#[derive(Debug, Args, Serialize, Default)]
pub struct TimeGrid {
    /// Explicit comma-separated times; overrides the range flags.
    #[arg(long = "t", value_delimiter = ',')]
    pub t: Option<Vec<f64>>,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub t_points: Option<usize>,
    /// Space the range geometrically.
    #[arg(long)]
    pub log_grid: bool,
}

impl TimeGrid {
    pub fn resolve(&self, lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, CliError> {
        if let Some(t) = &self.t {
            if t.is_empty() || t.windows(2).any(|w| w[0] > w[1]) {
                return Err(CliError::Usage("--t must be a nonempty ascending list".into()));
            }
            return Ok(t.clone());
        }
        let lo = self.t_min.unwrap_or(lo);
        let hi = self.t_max.unwrap_or(hi);
        let n = self.t_points.unwrap_or(points);
        if !(lo <= hi) || n == 0 {
            return Err(CliError::Usage(format!("empty time range [{lo}, {hi}] with {n} points")));
        }
        if self.log_grid {
            if !(lo > 0.0) {
                return Err(CliError::Usage("--log-grid needs --t-min > 0".into()));
            }
            Ok(logspace(lo, hi, n))
        } else {
            Ok(linspace(lo, hi, n))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Subcritical,
    CriticalTree,
    MassTransport,
    Geometric,
}

#[derive(Debug, Args, Serialize)]
pub struct PercolateArgs {
    pub experiment: Experiment,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub side: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub grid: TimeGrid,
    /// Children per vertex on the tree.
    #[arg(long, default_value_t = 2)]
    pub branching: usize,
    /// Galton-Watson size cap.
    #[arg(long, default_value_t = 10_000)]
    pub size_cap: usize,
    /// Largest cluster handled spectrally; defaults to 2000, or the size cap
    /// on the tree.
    #[arg(long)]
    pub spectral_limit: Option<usize>,
    /// Scale of the geometric cluster-size law.
    #[arg(long, default_value_t = 2.0)]
    pub n_hat: f64,
    /// Degree bound of the geometric clusters.
    #[arg(long, default_value_t = 4)]
    pub delta: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct IdsArgs {
    #[arg(long, default_value_t = 0.3)]
    pub p: f64,
    #[arg(long, default_value_t = 64)]
    pub side: usize,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Rejected: the density of states experiment runs on boxes.
    #[arg(long)]
    pub periodic: bool,
    /// Explicit comma-separated energies.
    #[arg(long = "e", value_delimiter = ',')]
    pub e: Option<Vec<f64>>,
    /// Energies on (0, 2 E_hat] when `--e` is absent.
    #[arg(long, default_value_t = 40)]
    pub e_points: usize,
    /// Times for the Laplace-transform identity; none by default.
    #[arg(long = "t", value_delimiter = ',')]
    pub t: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Haupt,
    Trivial,
    App,
    Bperc,
    Critical2d,
    TreeLower,
    Lifshitz,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundsArgs {
    pub kind: BoundKind,
    /// Graph order.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub delta: Option<usize>,
    #[arg(long)]
    pub n_hat: Option<f64>,
    /// Plug-in value of `E[1/|C_o|]`.
    #[arg(long)]
    pub inv_size: Option<f64>,
    #[arg(long)]
    pub chi: Option<f64>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub b_bar: f64,
    #[command(flatten)]
    pub grid: TimeGrid,
    #[arg(long)]
    pub e_min: Option<f64>,
    #[arg(long)]
    pub e_max: Option<f64>,
    #[arg(long)]
    pub e_points: Option<usize>,
}
