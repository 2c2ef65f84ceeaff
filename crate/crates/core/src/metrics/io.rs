use std::collections::HashMap;
use std::io::{Read, Write};

use super::{Prediction, PredictionSet};
use crate::error::{Error, Result};
use crate::ingest::LABEL_THRESHOLD;

/// A classifier output awaiting its ground-truth label.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredId {
    pub id: String,
    pub predicted_label: u8,
    pub score: f64,
}

struct Table {
    headers: csv::StringRecord,
    rows: Vec<csv::StringRecord>,
}

impl Table {
    fn read<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        let rows = rdr.records().collect::<std::result::Result<_, _>>()?;
        Ok(Table { headers, rows })
    }

    fn column(&self, names: &[&str]) -> Option<usize> {
        names.iter().find_map(|n| self.headers.iter().position(|h| h == *n))
    }

    fn require(&self, name: &str) -> Result<usize> {
        self.column(&[name])
            .ok_or_else(|| Error::Validation(format!("missing `{name}` column")))
    }
}

fn line(row: &csv::StringRecord, k: usize) -> usize {
    row.position().map(|p| p.line() as usize).unwrap_or(k + 2)
}

fn cell(row: &csv::StringRecord, col: usize, k: usize) -> Result<&str> {
    row.get(col).ok_or_else(|| Error::Parse {
        row: line(row, k),
        message: "row is shorter than the header".into(),
    })
}

fn label(row: &csv::StringRecord, col: usize, k: usize) -> Result<u8> {
    match cell(row, col, k)? {
        "0" => Ok(0),
        "1" => Ok(1),
        other => Err(Error::Parse {
            row: line(row, k),
            message: format!("label `{other}` is not 0 or 1"),
        }),
    }
}

fn score(row: &csv::StringRecord, col: usize, k: usize) -> Result<f64> {
    let s = cell(row, col, k)?;
    s.parse().map_err(|_| Error::Parse {
        row: line(row, k),
        message: format!("score `{s}` is not a number"),
    })
}

/// Reads `id,true_label,predicted_label,score`.
pub fn read_predictions<R: Read>(reader: R) -> Result<PredictionSet> {
    let t = Table::read(reader)?;
    let (id, truth, pred, sc) = (
        t.require("id")?,
        t.require("true_label")?,
        t.require("predicted_label")?,
        t.require("score")?,
    );
    let records = t
        .rows
        .iter()
        .enumerate()
        .map(|(k, r)| {
            Ok(Prediction {
                id: cell(r, id, k)?.to_string(),
                true_label: label(r, truth, k)?,
                predicted_label: label(r, pred, k)?,
                score: score(r, sc, k)?,
            })
        })
        .collect::<Result<_>>()?;
    PredictionSet::new(records)
}

/// Reads ground truth as `id` plus `true_label` (or `label`). Rows with an
/// empty label are skipped.
pub fn read_labels<R: Read>(reader: R) -> Result<Vec<(String, u8)>> {
    let t = Table::read(reader)?;
    let id = t.require("id")?;
    let truth = t
        .column(&["true_label", "label"])
        .ok_or_else(|| Error::Validation("missing `true_label` column".into()))?;
    let mut out = Vec::new();
    for (k, r) in t.rows.iter().enumerate() {
        if cell(r, truth, k)?.is_empty() {
            continue;
        }
        out.push((cell(r, id, k)?.to_string(), label(r, truth, k)?));
    }
    Ok(out)
}

/// Reads classifier output as `id,score` with an optional `predicted_label`
/// column. Without it, labels follow the score at the 0.5 threshold.
pub fn read_scored<R: Read>(reader: R) -> Result<Vec<ScoredId>> {
    let t = Table::read(reader)?;
    let (id, sc) = (t.require("id")?, t.require("score")?);
    let pred = t.column(&["predicted_label"]);
    t.rows
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let score = score(r, sc, k)?;
            let predicted_label = match pred {
                Some(c) => label(r, c, k)?,
                None => u8::from(score >= LABEL_THRESHOLD),
            };
            Ok(ScoredId {
                id: cell(r, id, k)?.to_string(),
                predicted_label,
                score,
            })
        })
        .collect()
}

/// Inner join of ground truth and classifier output on id, in truth order.
pub fn join_predictions(truth: &[(String, u8)], scored: &[ScoredId]) -> Result<PredictionSet> {
    let by_id: HashMap<&str, &ScoredId> = scored.iter().map(|s| (s.id.as_str(), s)).collect();
    if by_id.len() != scored.len() {
        return Err(Error::Validation("duplicate ids in classifier output".into()));
    }
    let records: Vec<Prediction> = truth
        .iter()
        .filter_map(|(id, t)| {
            by_id.get(id.as_str()).map(|s| Prediction {
                id: id.clone(),
                true_label: *t,
                predicted_label: s.predicted_label,
                score: s.score,
            })
        })
        .collect();
    if records.is_empty() {
        return Err(Error::Join(format!(
            "no ids in common between {} labeled and {} scored records",
            truth.len(),
            scored.len()
        )));
    }
    PredictionSet::new(records)
}

pub fn write_predictions<W: Write>(preds: &PredictionSet, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["id", "true_label", "predicted_label", "score"])?;
    for p in preds.records() {
        wtr.write_record([
            p.id.clone(),
            p.true_label.to_string(),
            p.predicted_label.to_string(),
            p.score.to_string(),
        ])?;
    }
    wtr.flush().map_err(|e| Error::io("<predictions output>", e))?;
    Ok(())
}
