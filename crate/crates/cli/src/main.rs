//! `esg-irt`: batch front end for the ESG news Rasch and model-ranking
//! pipeline.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;

#[derive(Debug, Parser)]
#[command(
    name = "esg-irt",
    version,
    about = "Rasch analysis of ESG news sentiment and TOPSIS model ranking"
)]
struct Cli {
    /// TOML configuration file; command-line flags take precedence over it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the month-by-row response matrix and a monthly summary from a corpus.
    Ingest(IngestArgs),
    /// Shuffle a corpus and split it into training and validation files.
    Split(SplitArgs),
    /// Label unlabeled records with the ESG lexicon scorer and export scores.
    Classify(ClassifyArgs),
    /// Fit the Rasch model to a response matrix.
    Fit(FitArgs),
    /// Tabulate and plot item characteristic and information curves.
    Curves(CurvesArgs),
    /// Evaluate classifier predictions.
    Metrics(MetricsArgs),
    /// Rank training runs from a metric log with TOPSIS.
    Topsis(TopsisArgs),
    /// Enumerate a hyperparameter grid.
    Grid(GridArgs),
}

#[derive(Debug, Args)]
struct CorpusInput {
    /// Corpus file (CSV or JSON Lines).
    #[arg(short, long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Corpus format: csv or jsonl (default: from the file extension).
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Args)]
struct OutDir {
    /// Directory receiving the output files (default: current directory).
    #[arg(short, long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[command(flatten)]
    corpus: CorpusInput,
    /// Analysis period, `YYYY-MM..YYYY-MM` or `YYYY` (default: span of the corpus).
    #[arg(long)]
    period: Option<String>,
    /// Label unlabeled records with the lexicon scorer instead of failing.
    #[arg(long)]
    classify: bool,
    /// ESG definitions JSON for the lexicon scorer (default: built in).
    #[arg(long, value_name = "FILE")]
    definitions: Option<PathBuf>,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[command(flatten)]
    corpus: CorpusInput,
    /// Fraction of records used for training.
    #[arg(long)]
    fraction: Option<f64>,
    /// Shuffle seed.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    corpus: CorpusInput,
    /// ESG definitions JSON for the lexicon scorer (default: built in).
    #[arg(long, value_name = "FILE")]
    definitions: Option<PathBuf>,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Response matrix CSV (default: matrix.csv in the output directory).
    #[arg(short, long, value_name = "FILE")]
    matrix: Option<PathBuf>,
    /// Fit only the months in this period, `YYYY-MM..YYYY-MM` or `YYYY`.
    #[arg(long)]
    period: Option<String>,
    /// Convergence tolerance on the largest score residual.
    #[arg(long)]
    tol: Option<f64>,
    /// Maximum number of alternating Newton sweeps.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Rescale difficulties by (L-1)/L after convergence.
    #[arg(long)]
    bias_correction: bool,
    /// Write estimates even when the iteration limit is reached.
    #[arg(long)]
    allow_nonconverged: bool,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    /// Fit JSON written by `fit` (default: fit.json in the output directory).
    #[arg(short, long, value_name = "FILE")]
    fit: Option<PathBuf>,
    /// Lower end of the ability grid.
    #[arg(long, allow_hyphen_values = true)]
    theta_min: Option<f64>,
    /// Upper end of the ability grid.
    #[arg(long, allow_hyphen_values = true)]
    theta_max: Option<f64>,
    /// Number of grid points, endpoints included.
    #[arg(long)]
    steps: Option<usize>,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// Validation predictions: id,true_label,predicted_label,score.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["truth", "scores"])]
    predictions: Option<PathBuf>,
    /// Ground truth (id plus true_label or label), joined with --scores.
    #[arg(long, value_name = "FILE", requires = "scores")]
    truth: Option<PathBuf>,
    /// Classifier output (id, score, optional predicted_label).
    #[arg(long, value_name = "FILE", requires = "truth")]
    scores: Option<PathBuf>,
    /// Training-set predictions, for train_loss and train_accuracy.
    #[arg(long, value_name = "FILE")]
    train_predictions: Option<PathBuf>,
    /// Append the nine criteria as one row of this metric log.
    #[arg(long, value_name = "FILE")]
    append_to: Option<PathBuf>,
    /// Run id for the appended row (default: next `run-NNN`).
    #[arg(long, requires = "append_to")]
    run_id: Option<String>,
    /// Run parameter `name=value` for the appended row; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE", requires = "append_to")]
    params: Vec<String>,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Debug, Args)]
pub struct TopsisArgs {
    /// Metric log CSV, one row per training run.
    #[arg(short, long, value_name = "FILE")]
    records: Option<PathBuf>,
    /// TOML file with [weights] and optional [directions] tables.
    #[arg(long, value_name = "FILE")]
    weights: Option<PathBuf>,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Parameter `name=v1,v2,...`; repeatable, declaration order kept.
    /// Without any, the classifier sweep is used.
    #[arg(long = "param", value_name = "NAME=VALUES")]
    params: Vec<String>,
    #[command(flatten)]
    out: OutDir,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> error::CliResult<()> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Ingest(a) => commands::ingest::run(&config, a),
        Command::Split(a) => commands::split::run(&config, a),
        Command::Classify(a) => commands::classify::run(&config, a),
        Command::Fit(a) => commands::fit::run(&config, a),
        Command::Curves(a) => commands::curves::run(&config, a),
        Command::Metrics(a) => commands::metrics::run(&config, a),
        Command::Topsis(a) => commands::topsis::run(&config, a),
        Command::Grid(a) => commands::grid::run(&config, a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn arguments_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn negative_theta_bounds_parse() {
        let cli = Cli::try_parse_from(["esg-irt", "curves", "--theta-min", "-3", "--theta-max", "3"]).unwrap();
        let Command::Curves(a) = cli.command else { panic!() };
        assert_eq!((a.theta_min, a.theta_max), (Some(-3.0), Some(3.0)));
    }
}
