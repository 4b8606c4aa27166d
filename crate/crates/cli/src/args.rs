use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "fpv",
    version,
    about = "Score sentences for perceived fairness using embedding axes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the sentences an embedding store must cover, one per line.
    ExportSentences(ExportArgs),
    /// Describe the axes built from a store: norms, Gram matrix, conditioning.
    Axes(AxesArgs),
    /// Score sentences against the fairness or baseline direction (CSV).
    Score(ScoreArgs),
    /// Per-axis cosine features for each corpus sentence (CSV).
    Features(FeaturesArgs),
    /// Classify by the sign of the score and report precision/recall/F1.
    EvalApproach1(Approach1Args),
    /// PCA + logistic regression on per-axis features, held-out evaluation.
    EvalApproach2(Approach2Args),
    /// Project sentence embeddings onto the span of the axes (CSV).
    Project(ProjectArgs),
    /// k-means over projection coefficients.
    Cluster(ClusterArgs),
    /// Pearson correlation between fairness scores and sentiment scores.
    Correlate(CorrelateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodArg {
    /// Sum of all axes.
    #[value(alias = "fairness_vector", alias = "fairness-vector")]
    #[serde(alias = "fairness_vector")]
    Fairness,
    /// "it was fair" minus "it was unfair".
    #[value(alias = "baseline_vector", alias = "baseline-vector")]
    #[serde(alias = "baseline_vector")]
    Baseline,
}

/// Inputs shared by every command that reads embeddings.
#[derive(Debug, Args)]
pub struct Inputs {
    /// JSON run configuration; flags given on the command line take precedence.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Embedding store (fpv-embeddings NDJSON).
    #[arg(long, value_name = "PATH")]
    pub embeddings: Option<PathBuf>,
    /// Axis config: JSON array of {name, positive, negative} [default: the five built-in axes].
    #[arg(long, value_name = "PATH")]
    pub axes: Option<PathBuf>,
    /// Scale every axis to unit length before use [default: off].
    #[arg(long)]
    pub unit_axes: bool,
    /// Bundled corpus name (full, illustrative) or a CSV path [default: full].
    #[arg(long, value_name = "NAME|PATH")]
    pub corpus: Option<String>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Corpora to include, repeatable; bundled name or CSV path [default: illustrative and full].
    #[arg(long, value_name = "NAME|PATH")]
    pub corpus: Vec<String>,
    /// Leave out the axis and baseline pole sentences.
    #[arg(long)]
    pub no_poles: bool,
    /// Leave out the single-word negation probes.
    #[arg(long)]
    pub no_probes: bool,
    /// Output file [default: stdout].
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AxesArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    #[arg(long, value_name = "PATH", help = "Output file [default: stdout]")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScoringOpts {
    /// Direction to score against [default: fairness].
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Scores above this are Fair; ties are Unfair [default: 0].
    #[arg(long, allow_negative_numbers = true)]
    pub threshold: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    #[command(flatten)]
    pub scoring: ScoringOpts,
    /// Score these texts instead of the corpus (repeatable; must be in the store).
    #[arg(long, value_name = "TEXT")]
    pub text: Vec<String>,
    /// Output file [default: stdout].
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FeaturesArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    /// Output file [default: stdout].
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportOpts {
    /// Directory for the report and per-sentence CSV.
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Print the report as JSON instead of a text summary.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct Approach1Args {
    #[command(flatten)]
    pub inputs: Inputs,
    #[command(flatten)]
    pub scoring: ScoringOpts,
    #[command(flatten)]
    pub report: ReportOpts,
}

#[derive(Debug, Args)]
pub struct Approach2Args {
    #[command(flatten)]
    pub inputs: Inputs,
    /// Seed for the train/test split (required unless --seeds or the config sets it).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Run once per seed and report mean and spread, e.g. "1-20" or "1,5,9".
    #[arg(long, value_name = "LIST")]
    pub seeds: Option<String>,
    /// Fraction of rows held out [default: 0.125].
    #[arg(long)]
    pub test_fraction: Option<f64>,
    /// Variance the PCA must retain [default: 0.95].
    #[arg(long)]
    pub pca_variance: Option<f64>,
    /// Initial gradient-descent step [default: 0.1].
    #[arg(long)]
    pub learning_rate: Option<f64>,
    /// Gradient-descent iteration cap [default: 5000].
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Gradient-norm stopping tolerance [default: 1e-6].
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// L2 penalty on the weights [default: 0.0001].
    #[arg(long)]
    pub l2: Option<f64>,
    #[command(flatten)]
    pub report: ReportOpts,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    /// Also cluster the coefficients into this many groups.
    #[arg(long, value_name = "K")]
    pub clusters: Option<usize>,
    /// Seed for k-means initialization (required with --clusters).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file [default: stdout].
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    /// Number of clusters [default: 2].
    #[arg(long)]
    pub k: Option<usize>,
    /// Seed for k-means initialization (required).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for projections.csv and clusters.json [default: summary to stdout].
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    #[command(flatten)]
    pub scoring: ScoringOpts,
    /// Sentiment CSV with header text,compound.
    #[arg(long, value_name = "PATH")]
    pub sentiment: Option<PathBuf>,
}
