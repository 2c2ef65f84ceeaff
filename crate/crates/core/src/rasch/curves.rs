use std::io::Write;

use crate::error::{Error, Result};

use super::{logistic, RaschFit};

pub const DEFAULT_THETA_MIN: f64 = -4.0;
pub const DEFAULT_THETA_MAX: f64 = 4.0;
pub const DEFAULT_THETA_STEPS: usize = 161;

#[derive(Debug, Clone, PartialEq)]
pub struct ItemCurve {
    pub label: String,
    pub difficulty: f64,
    /// Probability of a positive response at each grid point.
    pub icc: Vec<f64>,
    /// Item information at each grid point.
    pub iic: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    pub theta_grid: Vec<f64>,
    pub items: Vec<ItemCurve>,
}

/// Evaluates ICC and IIC of every estimated item on an evenly spaced grid
/// that includes both endpoints.
pub fn curve_table(fit: &RaschFit, theta_min: f64, theta_max: f64, steps: usize) -> Result<CurveTable> {
    if !(theta_min.is_finite() && theta_max.is_finite() && theta_min < theta_max) {
        return Err(Error::Validation(format!(
            "theta range must satisfy min < max, got [{theta_min}, {theta_max}]"
        )));
    }
    if steps < 2 {
        return Err(Error::Validation(format!("need at least 2 grid points, got {steps}")));
    }
    let last = (steps - 1) as f64;
    // weighted form keeps both endpoints exact and avoids accumulating error
    let theta_grid: Vec<f64> = (0..steps)
        .map(|k| (theta_min * (last - k as f64) + theta_max * k as f64) / last)
        .collect();
    let items = fit
        .estimated_items()
        .map(|(label, b)| {
            let (icc, iic) = theta_grid
                .iter()
                .map(|&t| {
                    let d = t - b;
                    let p = logistic(d);
                    (p, p * logistic(-d))
                })
                .unzip();
            ItemCurve {
                label: label.to_string(),
                difficulty: b,
                icc,
                iic,
            }
        })
        .collect();
    Ok(CurveTable { theta_grid, items })
}

impl CurveTable {
    /// CSV with a `theta` column followed by `<item>_icc,<item>_iic` per item.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let mut header = vec!["theta".to_string()];
        for c in &self.items {
            header.push(format!("{}_icc", c.label));
            header.push(format!("{}_iic", c.label));
        }
        wtr.write_record(&header)?;
        for (k, t) in self.theta_grid.iter().enumerate() {
            let mut row = vec![t.to_string()];
            for c in &self.items {
                row.push(c.icc[k].to_string());
                row.push(c.iic[k].to_string());
            }
            wtr.write_record(&row)?;
        }
        wtr.flush().map_err(|e| Error::io("<curves output>", e))?;
        Ok(())
    }
}
