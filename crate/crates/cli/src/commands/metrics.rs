use std::path::Path;

use esg_irt::metrics::{join_predictions, read_labels, read_predictions, read_scored, MetricsReport, PredictionSet};
use esg_irt::topsis::{read_metric_records, write_metric_records, ParamSet};

use super::{open, out_dir, write_text};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::MetricsArgs;

fn validation_set(args: &MetricsArgs) -> CliResult<PredictionSet> {
    if let Some(p) = &args.predictions {
        return Ok(read_predictions(open(p)?)?);
    }
    let (Some(t), Some(s)) = (&args.truth, &args.scores) else {
        return Err(CliError::Usage(
            "pass --predictions, or --truth together with --scores".into(),
        ));
    };
    let truth = read_labels(open(t)?)?;
    let scored = read_scored(open(s)?)?;
    let set = join_predictions(&truth, &scored)?;
    if set.len() < truth.len().max(scored.len()) {
        eprintln!(
            "note: joined {} records ({} labeled, {} scored)",
            set.len(),
            truth.len(),
            scored.len()
        );
    }
    Ok(set)
}

fn parse_params(specs: &[String]) -> CliResult<ParamSet> {
    specs
        .iter()
        .map(|s| {
            s.split_once('=')
                .map(|(n, v)| (n.trim().to_string(), v.trim().to_string()))
                .filter(|(n, _)| !n.is_empty())
                .ok_or_else(|| CliError::Usage(format!("parameter `{s}` is not NAME=VALUE")))
        })
        .collect::<CliResult<Vec<_>>>()
        .map(ParamSet)
}

fn append_to_log(log: &Path, report: &MetricsReport, args: &MetricsArgs) -> CliResult<String> {
    let mut records = if log.exists() {
        read_metric_records(open(log)?)?
    } else {
        Vec::new()
    };
    let id = match &args.run_id {
        Some(id) => id.clone(),
        None => (records.len() + 1..)
            .map(|k| format!("run-{k:03}"))
            .find(|id| records.iter().all(|r| &r.id != id))
            .expect("unbounded range"),
    };
    if records.iter().any(|r| r.id == id) {
        return Err(CliError::Usage(format!(
            "run id `{id}` already present in {}",
            log.display()
        )));
    }
    records.push(report.criteria.to_record(id.clone(), parse_params(&args.params)?)?);
    let mut buf = Vec::new();
    write_metric_records(&records, &mut buf)?;
    std::fs::write(log, buf).map_err(|e| CliError::io(log, e))?;
    Ok(id)
}

pub fn run(config: &RunConfig, args: MetricsArgs) -> CliResult<()> {
    let validation = validation_set(&args)?;
    let train = match &args.train_predictions {
        Some(p) => Some(read_predictions(open(p)?)?),
        None => None,
    };
    let report = MetricsReport::new(train.as_ref(), &validation)?;
    for w in report
        .train
        .iter()
        .chain([&report.validation])
        .flat_map(|e| &e.warnings)
    {
        eprintln!("warning: {w}");
    }
    write_text(&out_dir(config, &args.out), "metrics.json", &report.to_json_pretty()?)?;

    let v = &report.validation;
    let pct = v.row_percentages;
    println!(
        "{} records: accuracy {:.4}, loss {:.4}; class 0 row {:.2}%/{:.2}%, class 1 row {:.2}%/{:.2}%",
        v.records, v.accuracy, v.loss, pct[0][0], pct[0][1], pct[1][0], pct[1][1]
    );
    if let Some(log) = &args.append_to {
        let id = append_to_log(log, &report, &args)?;
        println!("appended {id} to {}", log.display());
    }
    Ok(())
}
