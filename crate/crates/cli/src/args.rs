use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "topofield",
    version,
    about = "Topology-aware subseasonal forecasting toolkit"
)]
pub struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true, env = "TOPOFIELD_THREADS")]
    pub threads: Option<usize>,

    /// Print a single JSON object instead of aligned text.
    #[arg(long, global = true)]
    pub json: bool,

    /// JSON file with defaults for any flag not given on the command line.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Normalization percentiles (and optionally the climatology) from training years.
    Stats(StatsArgs),
    /// Map a raw stack onto [0, 1] with stored percentiles.
    Normalize(NormalizeArgs),
    /// Build the four structural channels [SF, T, V, C] for every record.
    Channels(ChannelsArgs),
    /// Sublevel persistence diagrams of one field as CSV.
    Persistence(PersistenceArgs),
    /// Bottleneck distance between two diagram CSV files.
    Bottleneck(BottleneckArgs),
    /// Dual-trend sample dates, checked against a four-channel stack.
    Sample(SampleArgs),
    /// Blend interannual and recent-dynamics predictions with a λ-map.
    Fuse(FuseArgs),
    /// λ-map regularizer terms.
    Regularize(RegularizeArgs),
    /// Composite training objective for given predictions and scores.
    Losses(LossesArgs),
    /// Forecast verification metrics per target date.
    Evaluate(EvaluateArgs),
    /// Seasonal, lead-time and λ-by-error stratification tables.
    Stratify(StratifyArgs),
    /// Generate a synthetic daily dataset from a JSON spec.
    Synth(SynthArgs),
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Where to write the percentiles as JSON.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Training years, e.g. 1980-2015,2017.
    #[arg(long)]
    pub train_years: Option<String>,
    #[arg(long)]
    pub test_years: Option<String>,
    /// Also write the training-period calendar-day climatology (kelvin).
    #[arg(long, value_name = "PATH")]
    pub clim_output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct NormalizeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub stats: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Map normalized values back to kelvin.
    #[arg(long)]
    pub inverse: bool,
}

#[derive(Args, Debug)]
pub struct ChannelsArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Normalize first; omit when the input is already on [0, 1].
    #[arg(long)]
    pub stats: Option<PathBuf>,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct PersistenceArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Record to analyse; required when the stack holds several dates.
    #[arg(long)]
    pub date: Option<chrono::NaiveDate>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub dim: Option<u8>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BottleneckArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub dim: Option<u8>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RoleArg {
    Train,
    Test,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    /// Four-channel stack.
    #[arg(long)]
    pub input: PathBuf,
    /// Single target date; without it every buildable target is listed.
    #[arg(long)]
    pub date: Option<chrono::NaiveDate>,
    /// Fixed lead time; otherwise drawn uniformly from 30..=90 per target.
    #[arg(long)]
    pub tau: Option<i64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Keep only samples valid for this role of the split.
    #[arg(long, value_enum, requires = "train_years")]
    pub role: Option<RoleArg>,
    #[arg(long)]
    pub train_years: Option<String>,
    #[arg(long)]
    pub test_years: Option<String>,
    /// Manifest file, one line per sample.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FuseArgs {
    #[arg(long)]
    pub inter: PathBuf,
    #[arg(long)]
    pub intra: PathBuf,
    /// λ-map stack: one record for all dates or one per date.
    #[arg(long, value_name = "PATH")]
    pub lambda: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub residual: Option<PathBuf>,
    /// Clamp the result to [0, 1].
    #[arg(long)]
    pub clamp: bool,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Args, Debug, Default)]
pub struct RegFlags {
    #[arg(long)]
    pub eta1: Option<f64>,
    #[arg(long)]
    pub eta2: Option<f64>,
    #[arg(long)]
    pub eta3: Option<f64>,
    #[arg(long)]
    pub lambda_target: Option<f64>,
}

#[derive(Args, Debug)]
pub struct RegularizeArgs {
    #[arg(long, value_name = "PATH")]
    pub lambda: PathBuf,
    #[command(flatten)]
    pub weights: RegFlags,
}

#[derive(Args, Debug)]
pub struct LossesArgs {
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long)]
    pub truth: PathBuf,
    /// JSON {"real": [...], "fake": [...]} discriminator scores.
    #[arg(long)]
    pub scores: Option<PathBuf>,
    /// λ-map stack for the regularizer term.
    #[arg(long, value_name = "PATH")]
    pub lambda: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub step: u64,
    #[arg(long)]
    pub warmup: Option<u64>,
    #[arg(long)]
    pub every_n: Option<u64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[command(flatten)]
    pub reg: RegFlags,
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// Normalized predictions.
    #[arg(long)]
    pub pred: PathBuf,
    /// Normalized observations.
    #[arg(long)]
    pub truth: PathBuf,
    /// Calendar-day climatology in kelvin.
    #[arg(long)]
    pub clim: PathBuf,
    #[arg(long)]
    pub stats: PathBuf,
    /// Score only this date and print the record itself.
    #[arg(long)]
    pub date: Option<chrono::NaiveDate>,
    #[arg(long)]
    pub tau: Option<i64>,
    /// Records as a JSON array, the input of `stratify`.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct StratifyArgs {
    /// Records written by `evaluate --output`.
    #[arg(long)]
    pub input: PathBuf,
    /// RMSE bin edges in kelvin.
    #[arg(long)]
    pub bins: Option<String>,
    #[arg(long)]
    pub pred: Option<PathBuf>,
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long)]
    pub stats: Option<PathBuf>,
    #[arg(long, value_name = "PATH", requires_all = ["pred", "truth", "stats"])]
    pub lambda: Option<PathBuf>,
    /// Directory receiving seasonal.csv, lead_curves.csv and lambda_bins.csv.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Climate spec as JSON.
    #[arg(long)]
    pub input: PathBuf,
    /// Overrides the spec's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub output: PathBuf,
}
