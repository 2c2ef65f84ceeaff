//! The Rasch (one-parameter logistic) model for dichotomous responses.
//!
//! Under the model a row with ability `θ` answers an item of difficulty `b`
//! positively with probability `exp(θ − b) / (1 + exp(θ − b))`. Item
//! difficulties are identified by fixing their mean at zero.

mod ability;
mod curves;
mod fit_stats;
mod jmle;
mod report;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use ability::{estimate_ability, estimate_ability_or_wle, AbilityEstimate, AbilityMethod};
pub use curves::{curve_table, CurveTable, ItemCurve, DEFAULT_THETA_MAX, DEFAULT_THETA_MIN, DEFAULT_THETA_STEPS};
pub use fit_stats::{item_fit, FitStatistics, MeanSquares};
pub use jmle::{fit_jmle, JmleOptions, PARAMETER_BOUND};
pub use report::{Convergence, FitReport, ItemReport, PersonsSummary};

/// Numerically stable logistic function.
#[inline]
pub(crate) fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

fn check_finite(theta: f64, difficulty: f64) -> Result<()> {
    if theta.is_finite() && difficulty.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "theta and difficulty must be finite (got {theta}, {difficulty})"
        )))
    }
}

/// Item characteristic curve: probability of a positive response.
pub fn icc(theta: f64, difficulty: f64) -> Result<f64> {
    check_finite(theta, difficulty)?;
    Ok(logistic(theta - difficulty))
}

/// Item information `P(1 − P)`, maximal (0.25) at `theta == difficulty`.
///
/// `1 − P` is evaluated as the logistic of the negated argument so that the
/// tails keep full relative precision.
pub fn iic(theta: f64, difficulty: f64) -> Result<f64> {
    check_finite(theta, difficulty)?;
    let d = theta - difficulty;
    Ok(logistic(d) * logistic(-d))
}

/// Why a row or item was excluded before estimation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DropReason {
    /// No observed responses.
    AllMissing,
    /// Every observed response is 0.
    AllNegative,
    /// Every observed response is 1.
    AllPositive,
}

impl DropReason {
    /// Short reason used in reports: `"all-missing"` or `"extreme"`.
    pub fn as_str(self) -> &'static str {
        match self {
            DropReason::AllMissing => "all-missing",
            DropReason::AllNegative | DropReason::AllPositive => "extreme",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DroppedItem {
    pub index: usize,
    pub label: String,
    pub reason: DropReason,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DroppedRow {
    pub index: usize,
    pub reason: DropReason,
}

/// Estimated Rasch parameters. Entries for dropped items and rows are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct RaschFit {
    pub items: Vec<String>,
    pub difficulties: Vec<Option<f64>>,
    pub item_se: Vec<Option<f64>>,
    pub abilities: Vec<Option<f64>>,
    pub person_se: Vec<Option<f64>>,
    pub dropped_items: Vec<DroppedItem>,
    pub dropped_rows: Vec<DroppedRow>,
    pub converged: bool,
    pub iterations: usize,
    pub max_residual: f64,
    pub bias_corrected: bool,
}

impl RaschFit {
    /// Wraps externally known parameters (e.g. read back from a report or
    /// taken from a simulation) so they can be used for curves and fit
    /// statistics. `None` marks a dropped item or row.
    pub fn from_parameters(
        items: Vec<String>,
        difficulties: Vec<Option<f64>>,
        abilities: Vec<Option<f64>>,
    ) -> Result<Self> {
        if items.len() != difficulties.len() {
            return Err(Error::Validation(format!(
                "{} item labels but {} difficulties",
                items.len(),
                difficulties.len()
            )));
        }
        let dropped_items = difficulties
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_none())
            .map(|(index, _)| DroppedItem {
                index,
                label: items[index].clone(),
                reason: DropReason::AllMissing,
            })
            .collect();
        let dropped_rows = abilities
            .iter()
            .enumerate()
            .filter(|(_, a)| a.is_none())
            .map(|(index, _)| DroppedRow {
                index,
                reason: DropReason::AllMissing,
            })
            .collect();
        Ok(RaschFit {
            item_se: vec![None; items.len()],
            person_se: vec![None; abilities.len()],
            items,
            difficulties,
            abilities,
            dropped_items,
            dropped_rows,
            converged: true,
            iterations: 0,
            max_residual: 0.0,
            bias_corrected: false,
        })
    }

    /// (label, difficulty) of every estimated item, in item order.
    pub fn estimated_items(&self) -> impl Iterator<Item = (&str, f64)> {
        self.items
            .iter()
            .zip(&self.difficulties)
            .filter_map(|(l, d)| d.map(|d| (l.as_str(), d)))
    }

    pub fn drop_reason_of_item(&self, index: usize) -> Option<DropReason> {
        self.dropped_items.iter().find(|d| d.index == index).map(|d| d.reason)
    }

    pub fn drop_reason_of_row(&self, index: usize) -> Option<DropReason> {
        self.dropped_rows.iter().find(|d| d.index == index).map(|d| d.reason)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn icc_examples() {
        assert_eq!(icc(0.3, 0.3).unwrap(), 0.5);
        assert!((icc(1.0, 0.0).unwrap() - 0.731_058_578_630_004_9).abs() < 1e-15);
        assert!((icc(-2.0, 1.0).unwrap() - 0.047_425_873_177_566_78).abs() < 1e-15);
    }

    #[test]
    fn iic_examples() {
        assert_eq!(iic(1.7, 1.7).unwrap(), 0.25);
        assert!((iic(1.0, 0.0).unwrap() - 0.196_611_933_241_481_85).abs() < 1e-15);
        assert_eq!(iic(2.5, 1.0).unwrap(), iic(-0.5, 1.0).unwrap());
    }

    #[test]
    fn extreme_arguments_stay_finite() {
        assert_eq!(icc(700.0, 0.0).unwrap(), 1.0);
        assert!(icc(-700.0, 0.0).unwrap() > 0.0);
        assert!(iic(-700.0, 0.0).unwrap() >= 0.0);
        assert!(iic(0.0, 700.0).unwrap().is_finite());
    }

    #[test]
    fn non_finite_is_domain_error() {
        assert!(matches!(icc(f64::NAN, 0.0), Err(Error::Domain(_))));
        assert!(matches!(iic(0.0, f64::INFINITY), Err(Error::Domain(_))));
    }

    #[test]
    fn drop_reason_strings() {
        assert_eq!(DropReason::AllPositive.as_str(), "extreme");
        assert_eq!(DropReason::AllNegative.as_str(), "extreme");
        assert_eq!(DropReason::AllMissing.as_str(), "all-missing");
    }
}
