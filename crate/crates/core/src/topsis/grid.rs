use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One hyperparameter assignment, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamSet(pub Vec<(String, String)>);

impl ParamSet {
    pub fn get(&self, name: &str) -> Option<&str> {
        self.0.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for ParamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (name, value)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}={value}")?;
        }
        Ok(())
    }
}

/// Ordered hyperparameters with their admissible values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamGrid {
    parameters: Vec<(String, Vec<String>)>,
}

impl ParamGrid {
    pub fn new(parameters: Vec<(String, Vec<String>)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (name, values) in &parameters {
            if name.is_empty() {
                return Err(Error::Validation("parameter name is empty".into()));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::Validation(format!("duplicate parameter `{name}`")));
            }
            if values.is_empty() {
                return Err(Error::Validation(format!("parameter `{name}` has no values")));
            }
        }
        Ok(ParamGrid { parameters })
    }

    /// The BERT + LSTM classifier sweep: six parameters with three values
    /// each.
    pub fn classifier_sweep() -> Self {
        let p = |name: &str, values: [&str; 3]| (name.to_string(), values.iter().map(|v| v.to_string()).collect());
        ParamGrid::new(vec![
            p("lr", ["1e-5", "2e-5", "3e-5"]),
            p("layers", ["2", "5", "10"]),
            p("hidden", ["256", "512", "768"]),
            p("batch", ["5", "10", "20"]),
            p("epochs", ["2", "5", "10"]),
            p("max_len", ["50", "100", "200"]),
        ])
        .expect("static grid is valid")
    }

    /// Parses `name=v1,v2,...` specifications, one per parameter.
    pub fn from_specs<S: AsRef<str>>(specs: &[S]) -> Result<Self> {
        let parameters = specs
            .iter()
            .map(|s| {
                let s = s.as_ref();
                let (name, values) = s
                    .split_once('=')
                    .ok_or_else(|| Error::Validation(format!("parameter spec `{s}` is not name=v1,v2,...")))?;
                let values: Vec<String> = values
                    .split(',')
                    .map(str::trim)
                    .filter(|v| !v.is_empty())
                    .map(str::to_string)
                    .collect();
                Ok((name.trim().to_string(), values))
            })
            .collect::<Result<Vec<_>>>()?;
        ParamGrid::new(parameters)
    }

    pub fn parameters(&self) -> &[(String, Vec<String>)] {
        &self.parameters
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.parameters.iter().map(|(n, _)| n.as_str())
    }

    /// Number of combinations, `None` on overflow.
    pub fn len(&self) -> Option<usize> {
        self.parameters
            .iter()
            .try_fold(1usize, |acc, (_, v)| acc.checked_mul(v.len()))
    }

    pub fn is_empty(&self) -> bool {
        self.parameters.is_empty()
    }

    pub fn iter(&self) -> GridIter<'_> {
        GridIter {
            grid: self,
            odometer: vec![0; self.parameters.len()],
            done: false,
        }
    }
}

/// Streams the Cartesian product with the first parameter varying slowest.
pub struct GridIter<'a> {
    grid: &'a ParamGrid,
    odometer: Vec<usize>,
    done: bool,
}

impl Iterator for GridIter<'_> {
    type Item = ParamSet;

    fn next(&mut self) -> Option<ParamSet> {
        if self.done {
            return None;
        }
        let set = ParamSet(
            self.grid
                .parameters
                .iter()
                .zip(&self.odometer)
                .map(|((name, values), &k)| (name.clone(), values[k].clone()))
                .collect(),
        );
        // advance from the last parameter
        self.done = true;
        for (pos, (_, values)) in self.odometer.iter_mut().zip(&self.grid.parameters).rev() {
            *pos += 1;
            if *pos < values.len() {
                self.done = false;
                break;
            }
            *pos = 0;
        }
        Some(set)
    }
}

pub fn enumerate_grid(grid: &ParamGrid) -> Vec<ParamSet> {
    grid.iter().collect()
}
