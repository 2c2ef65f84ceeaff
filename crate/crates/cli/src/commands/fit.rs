use esg_irt::ingest::{Month, Period, ResponseMatrix};
use esg_irt::rasch::{fit_jmle, item_fit, FitReport, JmleOptions};

use super::{open, out_dir, parse_period, write_output, write_text};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::FitArgs;

/// Keeps the month columns inside `period` and describes what was fitted.
fn select_period(matrix: ResponseMatrix, period: Option<Period>) -> CliResult<(ResponseMatrix, String)> {
    let months: Option<Vec<Month>> = matrix.items().iter().map(|l| l.parse::<Month>().ok()).collect();
    let Some(period) = period else {
        let scope = match months.as_deref() {
            Some([first, .., last]) => format!("{first}..{last}"),
            Some([only]) => only.to_string(),
            _ => "all items".to_string(),
        };
        return Ok((matrix, scope));
    };
    let months =
        months.ok_or_else(|| CliError::Usage("--period needs a matrix whose columns are months (YYYY-MM)".into()))?;
    let keep: Vec<usize> = (0..months.len()).filter(|&j| period.contains(months[j])).collect();
    if keep.is_empty() {
        return Err(CliError::Usage(format!("no matrix columns fall inside {period}")));
    }
    Ok((matrix.select_items(&keep)?, period.to_string()))
}

pub fn run(config: &RunConfig, args: FitArgs) -> CliResult<()> {
    let dir = out_dir(config, &args.out);
    let rc = &config.rasch;
    let matrix_path = args
        .matrix
        .or_else(|| rc.matrix.clone())
        .unwrap_or_else(|| dir.join("matrix.csv"));
    let matrix = ResponseMatrix::read_csv(open(&matrix_path)?)?;
    let period = args
        .period
        .as_ref()
        .or(rc.period.as_ref())
        .map(|p| parse_period(p))
        .transpose()?;
    let (matrix, scope) = select_period(matrix, period)?;

    let defaults = JmleOptions::default();
    let opts = JmleOptions {
        max_iter: args.max_iter.or(rc.max_iter).unwrap_or(defaults.max_iter),
        tol: args.tol.or(rc.tol).unwrap_or(defaults.tol),
        bias_correction: args.bias_correction || rc.bias_correction.unwrap_or(defaults.bias_correction),
    };
    let fit = fit_jmle(&matrix, &opts)?;
    if !fit.converged {
        if !(args.allow_nonconverged || rc.allow_nonconverged.unwrap_or(false)) {
            return Err(CliError::NotConverged {
                iterations: fit.iterations,
                max_residual: fit.max_residual,
            });
        }
        eprintln!(
            "warning: not converged after {} iterations (max residual {:.3e})",
            fit.iterations, fit.max_residual
        );
    }
    let stats = item_fit(&matrix, &fit)?;
    let mut report = FitReport::new(&matrix, &fit, &stats)?;
    report.scope = Some(scope.clone());

    write_text(&dir, "fit.json", &report.to_json_pretty()?)?;
    write_output(&dir, "item_fit.csv", |buf| report.write_items_csv(buf))?;
    for d in &fit.dropped_items {
        eprintln!("note: item {} dropped ({})", d.label, d.reason.as_str());
    }
    println!(
        "fitted {} of {} items over {scope}; {} rows estimated; {} after {} iterations",
        fit.estimated_items().count(),
        matrix.n_items(),
        report.persons_summary.estimated,
        if fit.converged { "converged" } else { "stopped" },
        fit.iterations
    );
    Ok(())
}
