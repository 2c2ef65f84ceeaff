use esg_irt::ingest::{build_response_matrix, classify_with_hook, monthly_summary, Corpus, MonthSummary};
use serde::Serialize;

use super::{lexicon, load_corpus, out_dir, parse_period, write_output, write_text};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::IngestArgs;

#[derive(Serialize)]
struct Summary {
    period: String,
    records: usize,
    rows: usize,
    months: Vec<MonthSummary>,
}

pub fn run(config: &RunConfig, args: IngestArgs) -> CliResult<()> {
    let mut corpus = load_corpus(config, &args.corpus)?;
    if let Some(p) = args.period.as_ref().or(config.corpus.period.as_ref()) {
        let period = parse_period(p)?;
        let total = corpus.len();
        let kept: Vec<_> = corpus
            .into_records()
            .into_iter()
            .filter(|r| period.contains(r.month()))
            .collect();
        if kept.len() < total {
            eprintln!(
                "note: {} of {total} records fall outside {period} and were skipped",
                total - kept.len()
            );
        }
        corpus = Corpus::new(kept, Some(period))?;
    }
    if args.classify {
        let scorer = lexicon(config, args.definitions.as_ref())?;
        let unlabeled = corpus.unlabeled_ids().len();
        corpus = classify_with_hook(&corpus, &scorer)?;
        if unlabeled > 0 {
            eprintln!("note: labeled {unlabeled} records with the lexicon scorer");
        }
    }

    let matrix = build_response_matrix(&corpus)?;
    let summary = Summary {
        period: corpus.period().map(|p| p.to_string()).unwrap_or_default(),
        records: corpus.len(),
        rows: matrix.n_rows(),
        months: monthly_summary(&corpus),
    };
    let dir = out_dir(config, &args.out);
    write_output(&dir, "matrix.csv", |buf| matrix.write_csv(buf))?;
    write_text(
        &dir,
        "summary.json",
        &(serde_json::to_string_pretty(&summary).map_err(esg_irt::Error::from)? + "\n"),
    )?;
    println!(
        "{} records, {} months ({}), {} rows",
        summary.records,
        matrix.n_items(),
        summary.period,
        matrix.n_rows()
    );
    Ok(())
}
