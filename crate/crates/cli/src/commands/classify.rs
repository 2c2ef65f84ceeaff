use esg_irt::ingest::{classify_with_hook, write_corpus_csv, TextScorer, LABEL_THRESHOLD};
use esg_irt::Error;

use super::{lexicon, load_corpus, out_dir, write_output};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::ClassifyArgs;

/// Writes `labeled.csv` (existing labels kept, the rest filled in) and
/// `scores.csv` with the scorer's output for every record.
pub fn run(config: &RunConfig, args: ClassifyArgs) -> CliResult<()> {
    let corpus = load_corpus(config, &args.corpus)?;
    let scorer = lexicon(config, args.definitions.as_ref())?;
    let labeled = classify_with_hook(&corpus, &scorer)?;
    let scores = corpus
        .records()
        .iter()
        .map(|r| {
            scorer
                .score(&r.text)
                .map(|s| (r.id.as_str(), s))
                .map_err(|message| Error::Scorer {
                    id: r.id.clone(),
                    message,
                })
        })
        .collect::<esg_irt::Result<Vec<_>>>()?;

    let dir = out_dir(config, &args.out);
    write_output(&dir, "labeled.csv", |buf| write_corpus_csv(&labeled, buf))?;
    write_output(&dir, "scores.csv", |buf| {
        let mut wtr = csv::Writer::from_writer(buf);
        wtr.write_record(["id", "score", "predicted_label"])?;
        for (id, s) in &scores {
            let label = u8::from(*s >= LABEL_THRESHOLD);
            wtr.write_record([id.to_string(), s.to_string(), label.to_string()])?;
        }
        wtr.flush().map_err(|e| Error::Csv(e.into()))
    })?;
    println!(
        "scored {} records; labeled {} previously unlabeled",
        scores.len(),
        corpus.unlabeled_ids().len()
    );
    Ok(())
}
