//! Weighted TOPSIS ranking of candidate models.
//!
//! Each criterion column is divided by its Euclidean norm and multiplied by
//! its weight. Alternatives are then scored by their relative closeness
//! `d_worst / (d_best + d_worst)`, where the distances are Euclidean
//! distances to the per-criterion ideal best and ideal worst values.

mod grid;
mod records;

use std::collections::HashSet;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use grid::{enumerate_grid, GridIter, ParamGrid, ParamSet};
pub use records::{
    criteria_from_maps, default_criteria, rank_models, read_metric_records, write_metric_records, CriterionSpec,
    Metric, MetricRecord,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Larger is better.
    Benefit,
    /// Smaller is better.
    Cost,
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "benefit" | "max" => Ok(Direction::Benefit),
            "cost" | "min" => Ok(Direction::Cost),
            other => Err(Error::Validation(format!("unknown criterion direction `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub name: String,
    /// Weight as supplied; renormalized to sum 1 before use.
    pub weight: f64,
    pub direction: Direction,
}

/// Alternatives × criteria table.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionMatrix {
    alternatives: Vec<String>,
    criteria: Vec<Criterion>,
    weights: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl DecisionMatrix {
    pub fn new(alternatives: Vec<String>, criteria: Vec<Criterion>, values: Vec<Vec<f64>>) -> Result<Self> {
        if criteria.is_empty() {
            return Err(Error::Validation("decision matrix needs at least one criterion".into()));
        }
        let mut names = HashSet::new();
        for c in &criteria {
            if !names.insert(c.name.as_str()) {
                return Err(Error::Validation(format!("duplicate criterion `{}`", c.name)));
            }
            if !(c.weight.is_finite() && c.weight > 0.0) {
                return Err(Error::Validation(format!(
                    "criterion `{}` has weight {}; weights must be finite and positive",
                    c.name, c.weight
                )));
            }
        }
        let mut ids = HashSet::new();
        for a in &alternatives {
            if !ids.insert(a.as_str()) {
                return Err(Error::Validation(format!("duplicate alternative `{a}`")));
            }
        }
        if values.len() != alternatives.len() {
            return Err(Error::Validation(format!(
                "{} alternatives but {} value rows",
                alternatives.len(),
                values.len()
            )));
        }
        for (a, row) in alternatives.iter().zip(&values) {
            if row.len() != criteria.len() {
                return Err(Error::Validation(format!(
                    "alternative `{a}` has {} values, expected {}",
                    row.len(),
                    criteria.len()
                )));
            }
            if let Some((c, v)) = criteria.iter().zip(row).find(|(_, v)| !v.is_finite()) {
                return Err(Error::Validation(format!(
                    "alternative `{a}` has non-finite value {v} for `{}`",
                    c.name
                )));
            }
        }
        let total: f64 = criteria.iter().map(|c| c.weight).sum();
        let weights = criteria.iter().map(|c| c.weight / total).collect();
        Ok(DecisionMatrix {
            alternatives,
            criteria,
            weights,
            values,
        })
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn criteria(&self) -> &[Criterion] {
        &self.criteria
    }

    /// Weights rescaled to sum to one.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }
}

/// Vector-normalizes each criterion column and applies the (renormalized)
/// weights.
pub fn normalize(matrix: &DecisionMatrix) -> Result<Vec<Vec<f64>>> {
    let n_crit = matrix.criteria.len();
    let mut norms = vec![0.0; n_crit];
    for row in &matrix.values {
        for (n, v) in norms.iter_mut().zip(row) {
            *n += v * v;
        }
    }
    for (n, c) in norms.iter_mut().zip(&matrix.criteria) {
        *n = n.sqrt();
        if *n == 0.0 {
            return Err(Error::Normalization {
                criterion: c.name.clone(),
            });
        }
    }
    Ok(matrix
        .values
        .iter()
        .map(|row| {
            row.iter()
                .zip(&norms)
                .zip(&matrix.weights)
                .map(|((v, n), w)| v / n * w)
                .collect()
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionSummary {
    pub name: String,
    pub direction: Direction,
    pub raw_weight: f64,
    pub weight: f64,
    pub ideal_best: f64,
    pub ideal_worst: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlternativeScore {
    pub id: String,
    /// Normalized, weighted criterion values.
    pub weighted: Vec<f64>,
    pub d_best: f64,
    pub d_worst: f64,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopsisResult {
    pub criteria: Vec<CriterionSummary>,
    /// Scores in input order.
    pub alternatives: Vec<AlternativeScore>,
    /// Indices into `alternatives`, best first; ties go to the smaller id.
    pub ranking: Vec<usize>,
    pub warnings: Vec<String>,
}

impl TopsisResult {
    /// Alternatives best first, paired with their 1-based rank.
    pub fn ranked(&self) -> impl Iterator<Item = (usize, &AlternativeScore)> {
        self.ranking
            .iter()
            .enumerate()
            .map(|(r, &i)| (r + 1, &self.alternatives[i]))
    }

    pub fn best(&self) -> &AlternativeScore {
        &self.alternatives[self.ranking[0]]
    }

    /// `rank,id,score,d_best,d_worst`, best first.
    pub fn write_ranked_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(["rank", "id", "score", "d_best", "d_worst"])?;
        for (rank, a) in self.ranked() {
            wtr.write_record([
                rank.to_string(),
                a.id.clone(),
                a.score.to_string(),
                a.d_best.to_string(),
                a.d_worst.to_string(),
            ])?;
        }
        wtr.flush().map_err(|e| Error::io("<ranking output>", e))?;
        Ok(())
    }
}

/// Scores and ranks every alternative.
///
/// Ideal best is the column maximum of the weighted matrix for benefit
/// criteria and the minimum for cost criteria; ideal worst is the reverse.
/// Columns where all alternatives agree add nothing to either distance and
/// are reported as warnings.
pub fn topsis_score(matrix: &DecisionMatrix) -> Result<TopsisResult> {
    let m = matrix.alternatives.len();
    if m < 2 {
        return Err(Error::Scoring(format!("need ≥2 alternatives, got {m}")));
    }
    let weighted = normalize(matrix)?;

    let mut criteria = Vec::with_capacity(matrix.criteria.len());
    let mut warnings = Vec::new();
    for (j, c) in matrix.criteria.iter().enumerate() {
        let col = weighted.iter().map(|r| r[j]);
        let hi = col.clone().fold(f64::NEG_INFINITY, f64::max);
        let lo = col.fold(f64::INFINITY, f64::min);
        if hi == lo {
            warnings.push(format!("criterion `{}` is identical for every alternative", c.name));
        }
        let (ideal_best, ideal_worst) = match c.direction {
            Direction::Benefit => (hi, lo),
            Direction::Cost => (lo, hi),
        };
        criteria.push(CriterionSummary {
            name: c.name.clone(),
            direction: c.direction,
            raw_weight: c.weight,
            weight: matrix.weights[j],
            ideal_best,
            ideal_worst,
        });
    }
    if warnings.len() == criteria.len() {
        return Err(Error::Scoring(
            "every criterion is identical across alternatives; closeness is undefined".into(),
        ));
    }

    let alternatives: Vec<AlternativeScore> = matrix
        .alternatives
        .iter()
        .zip(weighted)
        .map(|(id, row)| {
            let (mut db, mut dw) = (0.0, 0.0);
            for (v, c) in row.iter().zip(&criteria) {
                db += (v - c.ideal_best).powi(2);
                dw += (v - c.ideal_worst).powi(2);
            }
            let (d_best, d_worst) = (db.sqrt(), dw.sqrt());
            AlternativeScore {
                id: id.clone(),
                weighted: row,
                d_best,
                d_worst,
                score: d_worst / (d_best + d_worst),
            }
        })
        .collect();

    let mut ranking: Vec<usize> = (0..m).collect();
    ranking.sort_by(|&a, &b| {
        alternatives[b]
            .score
            .total_cmp(&alternatives[a].score)
            .then_with(|| alternatives[a].id.cmp(&alternatives[b].id))
    });

    Ok(TopsisResult {
        criteria,
        alternatives,
        ranking,
        warnings,
    })
}
