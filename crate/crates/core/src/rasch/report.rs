use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{ResponseMatrix, Sentiment};

use super::{DropReason, FitStatistics, RaschFit};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemReport {
    pub label: String,
    pub difficulty: Option<f64>,
    pub se: Option<f64>,
    pub infit: Option<f64>,
    pub outfit: Option<f64>,
    /// Non-missing cells in the column.
    pub observed: usize,
    /// Positive responses in the column.
    pub raw_score: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dropped_reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersonsSummary {
    pub rows: usize,
    pub estimated: usize,
    pub dropped_all_missing: usize,
    pub dropped_extreme: usize,
    pub ability_mean: Option<f64>,
    pub ability_sd: Option<f64>,
    pub ability_min: Option<f64>,
    pub ability_max: Option<f64>,
    pub mean_se: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Convergence {
    pub converged: bool,
    pub iterations: usize,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraints {
    pub centering: String,
    pub bias_correction: bool,
}

/// Serializable summary of a Rasch fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub model: String,
    pub estimator: String,
    /// Free-form description of which items were fitted together.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scope: Option<String>,
    pub items: Vec<ItemReport>,
    pub persons_summary: PersonsSummary,
    pub convergence: Convergence,
    pub constraints: Constraints,
}

fn mean_sd(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = (values.len() > 1).then(|| (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt());
    (Some(mean), sd)
}

impl FitReport {
    pub fn new(matrix: &ResponseMatrix, fit: &RaschFit, stats: &FitStatistics) -> Result<Self> {
        if fit.items.as_slice() != matrix.items() || stats.items.len() != matrix.n_items() {
            return Err(Error::Validation("fit, statistics and matrix disagree on items".into()));
        }
        let items = (0..matrix.n_items())
            .map(|j| {
                let column: Vec<Sentiment> = (0..matrix.n_rows()).filter_map(|i| matrix.get(i, j)).collect();
                ItemReport {
                    label: fit.items[j].clone(),
                    difficulty: fit.difficulties[j],
                    se: fit.item_se[j],
                    infit: stats.items[j].map(|s| s.infit),
                    outfit: stats.items[j].map(|s| s.outfit),
                    observed: column.len(),
                    raw_score: column.iter().filter(|s| s.is_positive()).count(),
                    dropped_reason: fit.drop_reason_of_item(j).map(|r| r.as_str().to_string()),
                }
            })
            .collect();

        let abilities: Vec<f64> = fit.abilities.iter().flatten().copied().collect();
        let ses: Vec<f64> = fit.person_se.iter().flatten().copied().collect();
        let (ability_mean, ability_sd) = mean_sd(&abilities);
        let persons_summary = PersonsSummary {
            rows: fit.abilities.len(),
            estimated: abilities.len(),
            dropped_all_missing: fit
                .dropped_rows
                .iter()
                .filter(|d| d.reason == DropReason::AllMissing)
                .count(),
            dropped_extreme: fit
                .dropped_rows
                .iter()
                .filter(|d| d.reason != DropReason::AllMissing)
                .count(),
            ability_mean,
            ability_sd,
            ability_min: abilities.iter().copied().reduce(f64::min),
            ability_max: abilities.iter().copied().reduce(f64::max),
            mean_se: mean_sd(&ses).0,
        };

        Ok(FitReport {
            model: "rasch".into(),
            estimator: "jmle".into(),
            scope: None,
            items,
            persons_summary,
            convergence: Convergence {
                converged: fit.converged,
                iterations: fit.iterations,
                max_residual: fit.max_residual,
            },
            constraints: Constraints {
                centering: "mean-zero".into(),
                bias_correction: fit.bias_corrected,
            },
        })
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// One row per item: `label,difficulty,se,infit,outfit,observed,raw_score,dropped_reason`,
    /// with empty cells where a value is undefined.
    pub fn write_items_csv<W: Write>(&self, writer: W) -> Result<()> {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record([
            "label",
            "difficulty",
            "se",
            "infit",
            "outfit",
            "observed",
            "raw_score",
            "dropped_reason",
        ])?;
        for i in &self.items {
            wtr.write_record([
                i.label.clone(),
                opt(i.difficulty),
                opt(i.se),
                opt(i.infit),
                opt(i.outfit),
                i.observed.to_string(),
                i.raw_score.to_string(),
                i.dropped_reason.clone().unwrap_or_default(),
            ])?;
        }
        wtr.flush().map_err(|e| Error::io("<item statistics output>", e))?;
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let report: FitReport = serde_json::from_str(s)?;
        for item in &report.items {
            if item.difficulty.is_none() && item.dropped_reason.is_none() {
                return Err(Error::Validation(format!(
                    "item `{}` has neither a difficulty nor a drop reason",
                    item.label
                )));
            }
            if item.difficulty.is_some_and(|d| !d.is_finite()) {
                return Err(Error::Validation(format!(
                    "item `{}` has a non-finite difficulty",
                    item.label
                )));
            }
        }
        Ok(report)
    }

    /// Item parameters as a fit without person estimates, enough for curves.
    pub fn to_fit(&self) -> Result<RaschFit> {
        RaschFit::from_parameters(
            self.items.iter().map(|i| i.label.clone()).collect(),
            self.items.iter().map(|i| i.difficulty).collect(),
            Vec::new(),
        )
    }
}
