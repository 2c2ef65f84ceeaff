use std::collections::BTreeSet;

use esg_irt::ingest::Month;
use esg_irt::rasch::{curve_table, FitReport, DEFAULT_THETA_MAX, DEFAULT_THETA_MIN, DEFAULT_THETA_STEPS};
use esg_irt::svg::{curve_chart, render, CurveKind};

use super::{out_dir, read_to_string, write_output, write_text};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::CurvesArgs;

/// Month columns are plotted per calendar year; other labels share one chart.
fn group_of(label: &str) -> String {
    label
        .parse::<Month>()
        .map(|m| m.year().to_string())
        .unwrap_or_else(|_| "all".to_string())
}

pub fn run(config: &RunConfig, args: CurvesArgs) -> CliResult<()> {
    let dir = out_dir(config, &args.out);
    let cc = &config.curves;
    let fit_path = args
        .fit
        .or_else(|| cc.fit.clone())
        .unwrap_or_else(|| dir.join("fit.json"));
    let report = FitReport::from_json(&read_to_string(&fit_path)?)?;
    let table = curve_table(
        &report.to_fit()?,
        args.theta_min.or(cc.theta_min).unwrap_or(DEFAULT_THETA_MIN),
        args.theta_max.or(cc.theta_max).unwrap_or(DEFAULT_THETA_MAX),
        args.steps.or(cc.steps).unwrap_or(DEFAULT_THETA_STEPS),
    )?;
    write_output(&dir, "curves.csv", |buf| table.write_csv(buf))?;

    let groups: BTreeSet<String> = table.items.iter().map(|c| group_of(&c.label)).collect();
    for g in &groups {
        for (kind, title) in [
            (CurveKind::Icc, "Item characteristic curves"),
            (CurveKind::Iic, "Item information curves"),
        ] {
            let chart = curve_chart(&table, kind, &format!("{title}, {g}"), |l| group_of(l) == *g);
            write_text(&dir, &format!("{}_{g}.svg", kind.as_str()), &render(&chart))?;
        }
    }
    println!(
        "{} items on {} grid points; charts for {}",
        table.items.len(),
        table.theta_grid.len(),
        groups.into_iter().collect::<Vec<_>>().join(", ")
    );
    Ok(())
}
