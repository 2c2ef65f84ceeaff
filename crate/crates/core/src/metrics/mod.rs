//! Binary classification metrics over scored predictions.

mod io;
mod report;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{join_predictions, read_labels, read_predictions, read_scored, write_predictions, ScoredId};
pub use report::{evaluate, ClassMetrics, CriterionValues, Evaluation, MetricsReport};

/// Probabilities are clipped to `[EPSILON, 1 - EPSILON]` before taking logs.
pub const EPSILON: f64 = 1e-12;

/// One classified record. `score` is the probability of class 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub id: String,
    pub true_label: u8,
    pub predicted_label: u8,
    pub score: f64,
}

/// Predictions with unique ids, binary labels and scores in [0, 1].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PredictionSet {
    records: Vec<Prediction>,
}

impl PredictionSet {
    pub fn new(records: Vec<Prediction>) -> Result<Self> {
        let mut seen = HashSet::new();
        for p in &records {
            if !seen.insert(p.id.as_str()) {
                return Err(Error::Validation(format!("duplicate prediction id `{}`", p.id)));
            }
            if p.true_label > 1 || p.predicted_label > 1 {
                return Err(Error::Validation(format!("record `{}`: labels must be 0 or 1", p.id)));
            }
            if !(0.0..=1.0).contains(&p.score) {
                return Err(Error::Validation(format!(
                    "record `{}`: score {} is not a probability in [0, 1]",
                    p.id, p.score
                )));
            }
        }
        Ok(PredictionSet { records })
    }

    pub fn records(&self) -> &[Prediction] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    fn require_non_empty(&self) -> Result<()> {
        if self.is_empty() {
            return Err(Error::Validation("prediction set is empty".into()));
        }
        Ok(())
    }
}

/// 2×2 counts with class 0 = negative news and class 1 = positive news.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tp: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tn + self.fp + self.fn_ + self.tp
    }

    pub fn accuracy(&self) -> f64 {
        (self.tp + self.tn) as f64 / self.total() as f64
    }

    /// Percentages per true-class row: `[[tn, fp], [fn, tp]]`, each row
    /// summing to 100. A class with no records yields a row of zeros.
    pub fn row_percentages(&self) -> [[f64; 2]; 2] {
        let row = |a: u64, b: u64| {
            let n = (a + b) as f64;
            if n == 0.0 {
                [0.0, 0.0]
            } else {
                [100.0 * a as f64 / n, 100.0 * b as f64 / n]
            }
        };
        [row(self.tn, self.fp), row(self.fn_, self.tp)]
    }

    /// (true positives, false positives, false negatives) from the point of
    /// view of `class`.
    fn one_vs_rest(&self, class: u8) -> (u64, u64, u64) {
        if class == 1 {
            (self.tp, self.fp, self.fn_)
        } else {
            (self.tn, self.fn_, self.fp)
        }
    }
}

pub fn confusion(preds: &PredictionSet) -> Result<ConfusionMatrix> {
    preds.require_non_empty()?;
    let mut cm = ConfusionMatrix::default();
    for p in preds.records() {
        match (p.true_label, p.predicted_label) {
            (0, 0) => cm.tn += 1,
            (0, _) => cm.fp += 1,
            (_, 0) => cm.fn_ += 1,
            _ => cm.tp += 1,
        }
    }
    Ok(cm)
}

/// Precision, recall and F1 for one class. A zero denominator yields 0 and
/// sets `degenerate` instead of failing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub degenerate: bool,
}

pub fn precision_recall_f1(cm: &ConfusionMatrix, positive_class: u8) -> Result<ClassScores> {
    if positive_class > 1 {
        return Err(Error::Validation(format!("class must be 0 or 1, got {positive_class}")));
    }
    let (tp, fp, fn_) = cm.one_vs_rest(positive_class);
    let mut degenerate = false;
    let mut ratio = |num: f64, den: f64| {
        if den == 0.0 {
            degenerate = true;
            0.0
        } else {
            num / den
        }
    };
    let precision = ratio(tp as f64, (tp + fp) as f64);
    let recall = ratio(tp as f64, (tp + fn_) as f64);
    let f1 = ratio(2.0 * precision * recall, precision + recall);
    Ok(ClassScores {
        precision,
        recall,
        f1,
        degenerate,
    })
}

/// Area under the ROC curve for `positive_class`, computed as the fraction
/// of (positive, negative) pairs ordered correctly by score, ties counting
/// one half.
///
/// Records are always ranked by the class-1 probability, so for class 0 the
/// result is the chance that a class-0 record outscores a class-1 record and
/// the two per-class values sum to one on tie-free data.
pub fn auc_roc(preds: &PredictionSet, positive_class: u8) -> Result<f64> {
    if positive_class > 1 {
        return Err(Error::Validation(format!("class must be 0 or 1, got {positive_class}")));
    }
    let mut ranked: Vec<(f64, bool)> = preds
        .records()
        .iter()
        .map(|p| (p.score, p.true_label == positive_class))
        .collect();
    let n_pos = ranked.iter().filter(|r| r.1).count();
    let n_neg = ranked.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::UndefinedAuc(format!(
            "class {positive_class} needs both positive and negative records (got {n_pos} and {n_neg})"
        )));
    }
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0));

    // sum of mid-ranks of the positives
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < ranked.len() {
        let mut j = i;
        while j + 1 < ranked.len() && ranked[j + 1].0 == ranked[i].0 {
            j += 1;
        }
        let mid_rank = (i + j) as f64 / 2.0 + 1.0;
        rank_sum += mid_rank * ranked[i..=j].iter().filter(|r| r.1).count() as f64;
        i = j + 1;
    }
    let (p, n) = (n_pos as f64, n_neg as f64);
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * n))
}

/// Mean binary cross-entropy with scores clipped to `[EPSILON, 1 - EPSILON]`.
pub fn cross_entropy(preds: &PredictionSet) -> Result<f64> {
    preds.require_non_empty()?;
    let total: f64 = preds
        .records()
        .iter()
        .map(|p| {
            let s = p.score.clamp(EPSILON, 1.0 - EPSILON);
            if p.true_label == 1 {
                -s.ln()
            } else {
                -(1.0 - s).ln()
            }
        })
        .sum();
    Ok(total / preds.len() as f64)
}
