//! `scidetect`: build corpora, train the detectors and score abstracts.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 runtime error.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use scidetect::detector::ModelGroup;

#[derive(Debug, Parser)]
#[command(name = "scidetect", version, about = "Detect AI-generated scientific abstracts")]
pub struct Cli {
    /// Seed for splitting and explanation sampling.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// More diagnostics on stderr; repeat for more.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    /// Only errors on stderr.
    #[arg(short, long, global = true, conflicts_with = "verbose")]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a JSONL corpus and write it back normalized.
    Ingest(IngestArgs),
    /// Generate AI abstracts for a list of titles through a completions API.
    Generate(GenerateArgs),
    /// Train the n-gram language model and the TF-IDF embedding.
    TrainLm(TrainLmArgs),
    /// Turn a JSONL corpus into the feature CSV.
    Featurize(FeaturizeArgs),
    /// Calibrate the perplexity threshold on a feature CSV.
    CalibratePpl(CalibrateArgs),
    /// Fit logistic detectors per feature group and write the report.
    Train(TrainArgs),
    /// Score a model or threshold on a feature CSV.
    Evaluate(EvaluateArgs),
    /// Classify one abstract.
    Detect(DetectArgs),
    /// Word-level attributions for one abstract.
    Explain(ExplainArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SplitArg {
    Train,
    Test,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Assign a stratified train/test split with this train share.
    #[arg(long)]
    pub train_fraction: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// One title per line, optionally prefixed by `bio<TAB>` or `cs<TAB>`.
    #[arg(long)]
    pub titles: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Domain for lines without a prefix.
    #[arg(long, default_value = "cs")]
    pub domain: String,
    #[arg(long, default_value = "gen-")]
    pub id_prefix: String,
    #[arg(long)]
    pub endpoint: Option<String>,
    #[arg(long)]
    pub model: Option<String>,
    /// Name of the environment variable holding the API key.
    #[arg(long)]
    pub api_key_env: Option<String>,
    #[arg(long)]
    pub max_tokens: Option<u32>,
    #[arg(long)]
    pub temperature: Option<f64>,
    #[arg(long)]
    pub retries: Option<u32>,
    #[arg(long)]
    pub timeout_secs: Option<f64>,
    #[arg(long)]
    pub backoff_ms: Option<u64>,
    #[arg(long)]
    pub concurrency: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TrainLmArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub lm_out: PathBuf,
    #[arg(long)]
    pub embedding_out: PathBuf,
    /// Train only on human-written records.
    #[arg(long)]
    pub human_only: bool,
    #[arg(long, value_enum)]
    pub split: Option<SplitArg>,
    #[arg(long, default_value_t = 3)]
    pub order: usize,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2)]
    pub min_count: u64,
}

#[derive(Debug, Args)]
pub struct FeaturizeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub lm: PathBuf,
    #[arg(long)]
    pub embedding: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Only records assigned to this split.
    #[arg(long, value_enum)]
    pub split: Option<SplitArg>,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "syntax,semantics,pragmatics,all"
    )]
    pub groups: Vec<ModelGroup>,
    /// Held-out CSV for the F1 row of the report; training rows otherwise.
    #[arg(long)]
    pub test: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    pub ridge: f64,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("scorer").required(true).args(["model", "threshold"])))]
pub struct EvaluateArgs {
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub threshold: Option<PathBuf>,
    #[arg(long)]
    pub input: PathBuf,
    /// Metrics JSON; printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TextArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub lm: PathBuf,
    #[arg(long)]
    pub embedding: PathBuf,
    /// Abstract text file; standard input when omitted or `-`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub title: String,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub text: TextArgs,
    /// Number of feature contributions to show.
    #[arg(long, default_value_t = 5)]
    pub top: usize,
}

#[derive(Debug, Args)]
pub struct ExplainArgs {
    #[command(flatten)]
    pub text: TextArgs,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 10)]
    pub top_k: usize,
    /// Sample masks even for short texts.
    #[arg(long)]
    pub no_exhaustive: bool,
    /// Attribution JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error());
            ExitCode::from(f.code())
        }
    }
}
