use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "srgg", version, about = "Learn soft random geometric graphs and compare them")]
pub struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Learn the correlation matrix and graphical model of a dataset by MCMC.
    Learn(LearnArgs),
    /// Compare two learnt models from their trace files.
    Distance(DistanceArgs),
    /// Build a large network directly from correlations, without MCMC.
    Bignet(BignetArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Format {
    Dot,
    Graphml,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum LikelihoodArg {
    Auto,
    Marginalized,
    IndependentRows,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum ScaleModeArg {
    Auto,
    Divide,
    Shift,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum MissingArg {
    Zero,
    Bottom,
}

#[derive(Debug, Args, Serialize)]
pub struct LearnArgs {
    /// Numeric CSV, one column per variable (header optional).
    #[arg(long)]
    pub input: PathBuf,
    /// Uniformly subsample this many rows before learning.
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub iters: usize,
    #[arg(long, default_value_t = 5_000)]
    pub burnin: usize,
    #[arg(long, default_value_t = 0.05)]
    pub tau: f64,
    /// Proposal sd of the correlation entries.
    #[arg(long, default_value_t = 0.05)]
    pub sigma0: f64,
    /// Proposal sd of the edge variances.
    #[arg(long, default_value_t = 0.05)]
    pub w: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Seed for row subsampling (defaults to --seed).
    #[arg(long)]
    pub subsample_seed: Option<u64>,
    /// Include the Monte-Carlo normalization estimate in the correlation target.
    #[arg(long)]
    pub normalization: bool,
    #[arg(long, default_value_t = 200)]
    pub replicates: usize,
    #[arg(long, default_value_t = 10)]
    pub replicate_rows: usize,
    /// Comma-separated per-column measurement-noise sds.
    #[arg(long, value_delimiter = ',')]
    pub noise_sd: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = LikelihoodArg::Auto)]
    pub likelihood: LikelihoodArg,
    /// Apply the Hastings correction in the graph block.
    #[arg(long)]
    pub graph_hastings: bool,
    /// Plain Metropolis in both blocks (no proposal corrections).
    #[arg(long, conflicts_with = "graph_hastings")]
    pub plain_metropolis: bool,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Output file stem (defaults to the input file stem).
    #[arg(long)]
    pub prefix: Option<String>,
    /// Graph formats to write.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "dot")]
    pub format: Vec<Format>,
}

#[derive(Debug, Args, Serialize)]
pub struct DistanceArgs {
    pub trace1: PathBuf,
    pub trace2: PathBuf,
    /// Burn-in for both traces (default: read each trace's sidecar).
    #[arg(long)]
    pub burnin: Option<usize>,
    /// Align unequal post-burn-in lengths by truncating to the shorter.
    #[arg(long)]
    pub truncate_min: bool,
    #[arg(long, value_enum, default_value_t = ScaleModeArg::Auto)]
    pub scale_mode: ScaleModeArg,
    /// Write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct BignetArgs {
    /// Triples file: row id, column id, score.
    #[arg(long, conflicts_with = "corr", required_unless_present = "corr")]
    pub npmi: Option<PathBuf>,
    /// Dense correlation matrix CSV.
    #[arg(long)]
    pub corr: Option<PathBuf>,
    #[arg(long, default_value_t = 0.1)]
    pub tau: f64,
    /// CSV of `label,class` pairs.
    #[arg(long)]
    pub classes: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = MissingArg::Zero)]
    pub missing: MissingArg,
    /// Rank and correlate in single precision.
    #[arg(long)]
    pub f32: bool,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub prefix: Option<String>,
}
