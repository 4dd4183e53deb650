//! Command-line surface: subcommands and flags. Flags override values from
//! the TOML config file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "ties", version, about = "Topological sensitivity features for text")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full pipeline over a corpus and write a feature file.
    Extract(ExtractArgs),
    /// Persistence diagram of a distance matrix CSV.
    Ph(PhArgs),
    /// Distance between two diagram CSVs.
    Dist(DistArgs),
    /// Split a feature file and train the classifier on the train partition.
    Train(TrainArgs),
    /// Evaluate a trained model against a feature file partition.
    Eval(EvalArgs),
}

#[derive(Debug, Args, Default)]
pub struct ExtractArgs {
    /// TOML config file; every flag below overrides its file counterpart.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Corpus path (JSONL file or directory of .txt files).
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Corpus format: jsonl | dir.
    #[arg(long)]
    pub format: Option<String>,
    /// Embedding lexicon path (text format).
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Lowercase tokens before lookup.
    #[arg(long)]
    pub lowercase: Option<bool>,
    /// Stopword file (one word per line, # comments).
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Smoothing window size (odd).
    #[arg(long)]
    pub window_size: Option<usize>,
    /// Window kind: arithmetic | exponential.
    #[arg(long)]
    pub window_kind: Option<String>,
    /// Diagram distance: w1 | w2 | bottleneck.
    #[arg(long)]
    pub metric: Option<String>,
    /// Feature file to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Feature file format: csv | jsonl.
    #[arg(long)]
    pub out_format: Option<String>,
    /// Run report JSON path.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Worker thread count (also TIES_WORKERS).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PhArgs {
    /// Distance matrix CSV: D rows of D comma-separated values.
    pub matrix: PathBuf,
    /// Diagram CSV to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Highest homology dimension to compute: 0 | 1.
    #[arg(long, default_value_t = 1)]
    pub max_hdim: u8,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    pub diagram_a: PathBuf,
    pub diagram_b: PathBuf,
    /// Homology dimension to compare: 0 | 1.
    #[arg(long, default_value_t = 0)]
    pub hdim: u8,
    /// Distance: w1 | w2 | bottleneck.
    #[arg(long, default_value = "w1")]
    pub metric: String,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Feature file (csv or jsonl) produced by extract.
    #[arg(long)]
    pub features: PathBuf,
    /// Split seed.
    #[arg(long)]
    pub seed: u64,
    /// Train fraction.
    #[arg(long, default_value_t = 2.0 / 3.0)]
    pub fraction: f64,
    /// Model JSON to write.
    #[arg(long, default_value = "model.json")]
    pub out: PathBuf,
    /// L2 penalty.
    #[arg(long, default_value_t = 1e-3)]
    pub l2: f64,
    /// Gradient-descent learning rate.
    #[arg(long, default_value_t = 0.1)]
    pub learning_rate: f64,
    /// Epoch cap.
    #[arg(long, default_value_t = 2000)]
    pub max_epochs: usize,
    /// Gradient-norm stop tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Feature file the model was trained from.
    #[arg(long)]
    pub features: PathBuf,
    /// Model JSON written by train.
    #[arg(long)]
    pub model: PathBuf,
    /// Partition to evaluate: test | train | all.
    #[arg(long, default_value = "test")]
    pub on: String,
    /// Decision threshold.
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    /// Write metrics JSON here ("-" for stdout instead of the table).
    #[arg(long)]
    pub json: Option<PathBuf>,
}
