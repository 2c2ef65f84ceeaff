use esg_irt::topsis::{
    criteria_from_maps, rank_models, read_metric_records, CriterionSummary, Metric, MetricRecord, TopsisResult,
};
use serde::Serialize;

use super::{open, out_dir, write_output, write_text};
use crate::config::{load_weights, RunConfig};
use crate::error::{CliError, CliResult};
use crate::TopsisArgs;

#[derive(Serialize)]
struct Param<'a> {
    name: &'a str,
    value: &'a str,
}

#[derive(Serialize)]
struct RankedRun<'a> {
    rank: usize,
    id: &'a str,
    score: f64,
    d_best: f64,
    d_worst: f64,
    params: Vec<Param<'a>>,
}

#[derive(Serialize)]
struct Output<'a> {
    criteria: &'a [CriterionSummary],
    ranking: Vec<RankedRun<'a>>,
    warnings: &'a [String],
}

fn to_output<'a>(result: &'a TopsisResult, records: &'a [MetricRecord]) -> Output<'a> {
    let ranking = result
        .ranked()
        .zip(&result.ranking)
        .map(|((rank, a), &i)| RankedRun {
            rank,
            id: &a.id,
            score: a.score,
            d_best: a.d_best,
            d_worst: a.d_worst,
            params: records[i]
                .params
                .0
                .iter()
                .map(|(name, value)| Param { name, value })
                .collect(),
        })
        .collect();
    Output {
        criteria: &result.criteria,
        ranking,
        warnings: &result.warnings,
    }
}

pub fn run(config: &RunConfig, args: TopsisArgs) -> CliResult<()> {
    let path = args
        .records
        .or_else(|| config.topsis.records.clone())
        .ok_or_else(|| CliError::Usage("no metric log given; pass --records or set [topsis] records".into()))?;
    let records = read_metric_records(open(&path)?)?;

    let mut weights = match &args.weights {
        Some(p) => load_weights(p)?,
        None => config.topsis.clone(),
    };
    if weights.weights.is_empty() {
        weights.weights = Metric::ALL
            .map(|m| (m.name().to_string(), m.default_weight()))
            .into_iter()
            .collect();
    }
    let criteria = criteria_from_maps(&weights.weights, &weights.directions)?;
    let result = rank_models(&records, &criteria)?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }

    let dir = out_dir(config, &args.out);
    write_output(&dir, "ranked.csv", |buf| result.write_ranked_csv(buf))?;
    let json = serde_json::to_string_pretty(&to_output(&result, &records)).map_err(esg_irt::Error::from)?;
    write_text(&dir, "topsis.json", &(json + "\n"))?;

    let best = result.best();
    let params = &records[result.ranking[0]].params;
    println!("best: {} (score {:.6})", best.id, best.score);
    if params.0.is_empty() {
        println!("(no parameters recorded)");
    } else {
        println!("{params}");
    }
    Ok(())
}
