use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{topsis_score, Criterion, DecisionMatrix, Direction, ParamSet, TopsisResult};
use crate::error::{Error, Result};

/// The nine evaluation metrics logged per training run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    TrainLoss,
    TrainAccuracy,
    ValLoss,
    ValAccuracy,
    ValPrecision,
    ValRecall,
    ValF1,
    ValAucRoc1,
    ValAucRoc2,
}

impl Metric {
    pub const ALL: [Metric; 9] = [
        Metric::TrainLoss,
        Metric::TrainAccuracy,
        Metric::ValLoss,
        Metric::ValAccuracy,
        Metric::ValPrecision,
        Metric::ValRecall,
        Metric::ValF1,
        Metric::ValAucRoc1,
        Metric::ValAucRoc2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::TrainLoss => "train_loss",
            Metric::TrainAccuracy => "train_accuracy",
            Metric::ValLoss => "val_loss",
            Metric::ValAccuracy => "val_accuracy",
            Metric::ValPrecision => "val_precision",
            Metric::ValRecall => "val_recall",
            Metric::ValF1 => "val_f1",
            Metric::ValAucRoc1 => "val_auc_roc1",
            Metric::ValAucRoc2 => "val_auc_roc2",
        }
    }

    pub fn is_loss(self) -> bool {
        matches!(self, Metric::TrainLoss | Metric::ValLoss)
    }

    /// Losses are minimized; every other metric is maximized.
    pub fn default_direction(self) -> Direction {
        if self.is_loss() {
            Direction::Cost
        } else {
            Direction::Benefit
        }
    }

    /// Validation loss and accuracy weigh 0.2, everything else 0.1. These sum
    /// to 1.1 and are renormalized when scoring.
    pub fn default_weight(self) -> f64 {
        match self {
            Metric::ValLoss | Metric::ValAccuracy => 0.2,
            _ => 0.1,
        }
    }

    fn index(self) -> usize {
        Metric::ALL.iter().position(|&m| m == self).expect("listed")
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown metric `{s}`")))
    }
}

/// Evaluation metrics of one training run together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRecord {
    pub id: String,
    pub params: ParamSet,
    values: [Option<f64>; 9],
}

impl MetricRecord {
    /// Losses must be non-negative and every other metric must lie in [0, 1].
    pub fn new<I>(id: impl Into<String>, params: ParamSet, values: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Metric, f64)>,
    {
        let mut rec = MetricRecord {
            id: id.into(),
            params,
            values: [None; 9],
        };
        for (m, v) in values {
            rec.set(m, v)?;
        }
        Ok(rec)
    }

    pub fn set(&mut self, metric: Metric, value: f64) -> Result<()> {
        let ok = if metric.is_loss() {
            value.is_finite() && value >= 0.0
        } else {
            (0.0..=1.0).contains(&value)
        };
        if !ok {
            let range = if metric.is_loss() { "≥ 0" } else { "in [0, 1]" };
            return Err(Error::Validation(format!(
                "record `{}`: {metric} = {value} must be {range}",
                self.id
            )));
        }
        self.values[metric.index()] = Some(value);
        Ok(())
    }

    pub fn get(&self, metric: Metric) -> Option<f64> {
        self.values[metric.index()]
    }
}

/// One TOPSIS criterion drawn from the metric columns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriterionSpec {
    pub metric: Metric,
    pub weight: f64,
    pub direction: Direction,
}

/// All nine metrics with their default weights and directions.
pub fn default_criteria() -> Vec<CriterionSpec> {
    Metric::ALL
        .into_iter()
        .map(|metric| CriterionSpec {
            metric,
            weight: metric.default_weight(),
            direction: metric.default_direction(),
        })
        .collect()
}

/// Builds criteria from name-keyed weights, using the metrics named in
/// `weights` in canonical order. Directions default per metric.
pub fn criteria_from_maps(
    weights: &BTreeMap<String, f64>,
    directions: &BTreeMap<String, Direction>,
) -> Result<Vec<CriterionSpec>> {
    for name in weights.keys().chain(directions.keys()) {
        name.parse::<Metric>()?;
    }
    let specs: Vec<CriterionSpec> = Metric::ALL
        .into_iter()
        .filter_map(|metric| {
            weights.get(metric.name()).map(|&weight| CriterionSpec {
                metric,
                weight,
                direction: directions
                    .get(metric.name())
                    .copied()
                    .unwrap_or_else(|| metric.default_direction()),
            })
        })
        .collect();
    if specs.is_empty() {
        return Err(Error::Validation("no criteria weighted".into()));
    }
    Ok(specs)
}

/// Scores training runs by weighted TOPSIS over the chosen metrics.
pub fn rank_models(records: &[MetricRecord], criteria: &[CriterionSpec]) -> Result<TopsisResult> {
    if records.len() < 2 {
        return Err(Error::Scoring(format!("need ≥2 alternatives, got {}", records.len())));
    }
    if criteria.is_empty() {
        return Err(Error::Validation("no criteria given".into()));
    }
    let values = records
        .iter()
        .map(|r| {
            criteria
                .iter()
                .map(|c| {
                    r.get(c.metric)
                        .ok_or_else(|| Error::Validation(format!("record `{}` is missing metric `{}`", r.id, c.metric)))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let matrix = DecisionMatrix::new(
        records.iter().map(|r| r.id.clone()).collect(),
        criteria
            .iter()
            .map(|c| Criterion {
                name: c.metric.name().to_string(),
                weight: c.weight,
                direction: c.direction,
            })
            .collect(),
        values,
    )?;
    topsis_score(&matrix)
}

/// Reads the per-run metric log: an optional `id` column, parameter columns,
/// and metric columns named as in [`Metric::name`]. Rows without an id are
/// numbered `run-001`, `run-002`, ... by position.
pub fn read_metric_records<R: Read>(reader: R) -> Result<Vec<MetricRecord>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    enum Col {
        Id,
        Param(String),
        Metric(Metric),
    }
    let cols: Vec<Col> = headers
        .iter()
        .map(|h| match h {
            "id" => Col::Id,
            _ => h
                .parse::<Metric>()
                .map(Col::Metric)
                .unwrap_or_else(|_| Col::Param(h.to_string())),
        })
        .collect();
    if !cols.iter().any(|c| matches!(c, Col::Metric(_))) {
        return Err(Error::Validation(format!(
            "metric log has no metric columns (expected some of: {})",
            Metric::ALL.map(Metric::name).join(", ")
        )));
    }

    let rows: Vec<csv::StringRecord> = rdr.records().collect::<std::result::Result<_, _>>()?;
    let width = rows.len().to_string().len().max(3);
    rows.iter()
        .enumerate()
        .map(|(k, row)| {
            let line = row.position().map(|p| p.line() as usize).unwrap_or(k + 2);
            let mut id = format!("run-{:0width$}", k + 1);
            let mut params = Vec::new();
            let mut values = Vec::new();
            for (col, cell) in cols.iter().zip(row.iter()) {
                match col {
                    Col::Id if !cell.is_empty() => id = cell.to_string(),
                    Col::Id => {}
                    Col::Param(name) => params.push((name.clone(), cell.to_string())),
                    Col::Metric(_) if cell.is_empty() => {}
                    Col::Metric(m) => {
                        let v: f64 = cell.parse().map_err(|_| Error::Parse {
                            row: line,
                            message: format!("{m} value `{cell}` is not a number"),
                        })?;
                        values.push((*m, v));
                    }
                }
            }
            MetricRecord::new(id, ParamSet(params), values)
        })
        .collect()
}

/// Writes `id`, the parameter columns of the first record, then all nine
/// metrics (empty when absent).
pub fn write_metric_records<W: Write>(records: &[MetricRecord], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let names: Vec<&str> = records
        .first()
        .map(|r| r.params.0.iter().map(|(n, _)| n.as_str()).collect())
        .unwrap_or_default();
    let mut header = vec!["id"];
    header.extend(&names);
    header.extend(Metric::ALL.map(Metric::name));
    wtr.write_record(&header)?;
    for r in records {
        let r_names: Vec<&str> = r.params.0.iter().map(|(n, _)| n.as_str()).collect();
        if r_names != names {
            return Err(Error::Validation(format!("record `{}` has different parameters", r.id)));
        }
        let mut row = vec![r.id.clone()];
        row.extend(r.params.0.iter().map(|(_, v)| v.clone()));
        row.extend(Metric::ALL.map(|m| r.get(m).map(|v| v.to_string()).unwrap_or_default()));
        wtr.write_record(&row)?;
    }
    wtr.flush().map_err(|e| Error::io("<metric log output>", e))?;
    Ok(())
}
