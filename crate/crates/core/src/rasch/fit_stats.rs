use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::ResponseMatrix;

use super::{logistic, RaschFit};

/// Information-weighted (infit) and unweighted (outfit) mean squares.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanSquares {
    pub infit: f64,
    pub outfit: f64,
    /// Number of cells the statistics were computed over.
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitStatistics {
    pub items: Vec<Option<MeanSquares>>,
    pub persons: Vec<Option<MeanSquares>>,
}

#[derive(Default, Clone, Copy)]
struct Acc {
    sq_resid: f64,
    variance: f64,
    z2: f64,
    n: usize,
}

impl Acc {
    fn add(&mut self, x: f64, p: f64, q: f64) {
        let w = p * q;
        let r2 = (x - p) * (x - p);
        self.sq_resid += r2;
        self.variance += w;
        self.z2 += r2 / w;
        self.n += 1;
    }

    fn finish(self) -> Option<MeanSquares> {
        (self.n > 0).then(|| MeanSquares {
            infit: self.sq_resid / self.variance,
            outfit: self.z2 / self.n as f64,
            n: self.n,
        })
    }
}

/// Item and person mean-square fit statistics over the observed cells of
/// estimated rows and items.
///
/// With residual `x − P` and variance `W = P(1 − P)`, outfit is the mean of
/// `(x − P)² / W` and infit is `Σ(x − P)² / ΣW`.
pub fn item_fit(matrix: &ResponseMatrix, fit: &RaschFit) -> Result<FitStatistics> {
    if fit.items.as_slice() != matrix.items() {
        return Err(Error::Validation(format!(
            "fit has items [{}] but matrix has [{}]",
            fit.items.join(", "),
            matrix.items().join(", ")
        )));
    }
    if fit.abilities.len() != matrix.n_rows() {
        return Err(Error::Validation(format!(
            "fit has {} rows but matrix has {}",
            fit.abilities.len(),
            matrix.n_rows()
        )));
    }
    let mut items = vec![Acc::default(); matrix.n_items()];
    let mut persons = vec![Acc::default(); matrix.n_rows()];
    for (i, theta) in fit.abilities.iter().enumerate() {
        let Some(theta) = theta else { continue };
        for (j, cell) in matrix.row(i).iter().enumerate() {
            let (Some(x), Some(b)) = (cell, fit.difficulties[j]) else {
                continue;
            };
            let d = theta - b;
            let (p, q) = (logistic(d), logistic(-d));
            let x = f64::from(x.bit());
            items[j].add(x, p, q);
            persons[i].add(x, p, q);
        }
    }
    Ok(FitStatistics {
        items: items.into_iter().map(Acc::finish).collect(),
        persons: persons.into_iter().map(Acc::finish).collect(),
    })
}
