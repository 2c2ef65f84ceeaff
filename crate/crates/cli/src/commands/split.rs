use esg_irt::ingest::{split_train_val, write_corpus_csv};

use super::{load_corpus, out_dir, write_output};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::SplitArgs;

pub const DEFAULT_FRACTION: f64 = 0.9;
pub const DEFAULT_SEED: u64 = 42;

pub fn run(config: &RunConfig, args: SplitArgs) -> CliResult<()> {
    let corpus = load_corpus(config, &args.corpus)?;
    let fraction = args.fraction.or(config.split.fraction).unwrap_or(DEFAULT_FRACTION);
    let seed = args.seed.or(config.split.seed).unwrap_or(DEFAULT_SEED);
    let (train, val) = split_train_val(&corpus, fraction, seed)?;
    let dir = out_dir(config, &args.out);
    write_output(&dir, "train.csv", |buf| write_corpus_csv(&train, buf))?;
    write_output(&dir, "val.csv", |buf| write_corpus_csv(&val, buf))?;
    println!(
        "train {}, validation {} (fraction {fraction}, seed {seed})",
        train.len(),
        val.len()
    );
    Ok(())
}
