use serde::{Deserialize, Serialize};

use super::{auc_roc, confusion, cross_entropy, precision_recall_f1, ConfusionMatrix, PredictionSet};
use crate::error::{Error, Result};
use crate::topsis::{Metric, MetricRecord, ParamSet};

/// Per-class view of an evaluation. `auc_roc` is absent when the set holds
/// only one true class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: u8,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub degenerate: bool,
    pub auc_roc: Option<f64>,
}

/// Every metric computed over one prediction set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub records: usize,
    pub confusion: ConfusionMatrix,
    /// Rows are true classes 0 and 1, columns predicted classes.
    pub row_percentages: [[f64; 2]; 2],
    pub accuracy: f64,
    pub loss: f64,
    pub classes: [ClassMetrics; 2],
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

pub fn evaluate(preds: &PredictionSet) -> Result<Evaluation> {
    let cm = confusion(preds)?;
    let mut warnings = Vec::new();
    let mut class = |c: u8| -> Result<ClassMetrics> {
        let s = precision_recall_f1(&cm, c)?;
        if s.degenerate {
            warnings.push(format!("class {c}: zero denominator in precision, recall or F1"));
        }
        let auc = match auc_roc(preds, c) {
            Ok(a) => Some(a),
            Err(Error::UndefinedAuc(msg)) => {
                warnings.push(msg);
                None
            }
            Err(e) => return Err(e),
        };
        Ok(ClassMetrics {
            class: c,
            precision: s.precision,
            recall: s.recall,
            f1: s.f1,
            degenerate: s.degenerate,
            auc_roc: auc,
        })
    };
    let classes = [class(0)?, class(1)?];
    Ok(Evaluation {
        records: preds.len(),
        confusion: cm,
        row_percentages: cm.row_percentages(),
        accuracy: cm.accuracy(),
        loss: cross_entropy(preds)?,
        classes,
        warnings,
    })
}

/// The nine ranking criteria under their metric-log names. Precision,
/// recall and F1 refer to class 1; `val_auc_roc1` is the class-0 AUC and
/// `val_auc_roc2` the class-1 AUC.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CriterionValues {
    pub train_loss: Option<f64>,
    pub train_accuracy: Option<f64>,
    pub val_loss: Option<f64>,
    pub val_accuracy: Option<f64>,
    pub val_precision: Option<f64>,
    pub val_recall: Option<f64>,
    pub val_f1: Option<f64>,
    pub val_auc_roc1: Option<f64>,
    pub val_auc_roc2: Option<f64>,
}

impl CriterionValues {
    pub fn from_evaluations(train: Option<&Evaluation>, validation: &Evaluation) -> Self {
        let positive = &validation.classes[1];
        CriterionValues {
            train_loss: train.map(|t| t.loss),
            train_accuracy: train.map(|t| t.accuracy),
            val_loss: Some(validation.loss),
            val_accuracy: Some(validation.accuracy),
            val_precision: Some(positive.precision),
            val_recall: Some(positive.recall),
            val_f1: Some(positive.f1),
            val_auc_roc1: validation.classes[0].auc_roc,
            val_auc_roc2: positive.auc_roc,
        }
    }

    pub fn get(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::TrainLoss => self.train_loss,
            Metric::TrainAccuracy => self.train_accuracy,
            Metric::ValLoss => self.val_loss,
            Metric::ValAccuracy => self.val_accuracy,
            Metric::ValPrecision => self.val_precision,
            Metric::ValRecall => self.val_recall,
            Metric::ValF1 => self.val_f1,
            Metric::ValAucRoc1 => self.val_auc_roc1,
            Metric::ValAucRoc2 => self.val_auc_roc2,
        }
    }

    /// A metric-log row for ranking; absent values stay absent.
    pub fn to_record(&self, id: impl Into<String>, params: ParamSet) -> Result<MetricRecord> {
        MetricRecord::new(
            id,
            params,
            Metric::ALL.into_iter().filter_map(|m| self.get(m).map(|v| (m, v))),
        )
    }
}

/// Evaluation of a training run, as written by the `metrics` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub train: Option<Evaluation>,
    pub validation: Evaluation,
    pub criteria: CriterionValues,
}

impl MetricsReport {
    pub fn new(train: Option<&PredictionSet>, validation: &PredictionSet) -> Result<Self> {
        let train = train.map(evaluate).transpose()?;
        let validation = evaluate(validation)?;
        let criteria = CriterionValues::from_evaluations(train.as_ref(), &validation);
        Ok(MetricsReport {
            train,
            validation,
            criteria,
        })
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}
