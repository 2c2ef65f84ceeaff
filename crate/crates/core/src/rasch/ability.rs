use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::Sentiment;

use super::logistic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AbilityMethod {
    MaximumLikelihood,
    /// Warm's weighted likelihood; used only for extreme raw scores.
    WeightedLikelihood,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbilityEstimate {
    pub theta: f64,
    pub se: f64,
    pub method: AbilityMethod,
}

/// Observed (response, difficulty) pairs of a pattern.
fn observed(pattern: &[Option<Sentiment>], difficulties: &[f64]) -> Result<Vec<(f64, f64)>> {
    if pattern.len() != difficulties.len() {
        return Err(Error::Validation(format!(
            "pattern has {} entries but {} difficulties were given",
            pattern.len(),
            difficulties.len()
        )));
    }
    if let Some(b) = difficulties.iter().find(|b| !b.is_finite()) {
        return Err(Error::Domain(format!("difficulty {b} is not finite")));
    }
    let obs: Vec<(f64, f64)> = pattern
        .iter()
        .zip(difficulties)
        .filter_map(|(x, &b)| x.map(|s| (f64::from(s.bit()), b)))
        .collect();
    if obs.is_empty() {
        return Err(Error::Validation("pattern has no observed responses".into()));
    }
    Ok(obs)
}

/// Expected score and test information at `theta`.
fn moments(obs: &[(f64, f64)], theta: f64) -> (f64, f64) {
    obs.iter().fold((0.0, 0.0), |(e, v), &(_, b)| {
        let d = theta - b;
        let p = logistic(d);
        (e + p, v + p * logistic(-d))
    })
}

/// Maximum-likelihood ability for a response pattern given known item
/// difficulties; missing entries are ignored.
///
/// The score function `Σ(x − P)` is strictly decreasing in θ, so its root
/// is unique. It is located by Newton steps kept inside a shrinking
/// bracket, falling back to bisection whenever a step would leave it.
pub fn estimate_ability(pattern: &[Option<Sentiment>], difficulties: &[f64]) -> Result<AbilityEstimate> {
    let obs = observed(pattern, difficulties)?;
    let n = obs.len();
    let raw: f64 = obs.iter().map(|(x, _)| x).sum();
    if raw == 0.0 || raw == n as f64 {
        return Err(Error::ExtremeScore {
            raw_score: raw as usize,
            max_score: n,
        });
    }

    let (b_min, b_max) = obs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, b)| {
            (lo.min(b), hi.max(b))
        });
    // P < 1/(n+1) for every item below lo and P > n/(n+1) above hi, which
    // brackets any raw score in 1..n-1
    let margin = ((n + 1) as f64).ln() + 1.0;
    let (mut lo, mut hi) = (b_min - margin, b_max + margin);
    let mean_b = obs.iter().map(|(_, b)| b).sum::<f64>() / n as f64;
    let mut theta = (mean_b + (raw / (n as f64 - raw)).ln()).clamp(lo, hi);

    for _ in 0..200 {
        let (e, info) = moments(&obs, theta);
        let f = raw - e;
        if f == 0.0 {
            break;
        }
        if f > 0.0 {
            lo = theta;
        } else {
            hi = theta;
        }
        let newton = theta + f / info;
        let next = if newton >= lo && newton <= hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let done = (next - theta).abs() < 1e-13 * (1.0 + theta.abs());
        theta = next;
        if done {
            break;
        }
    }
    let (_, info) = moments(&obs, theta);
    Ok(AbilityEstimate {
        theta,
        se: 1.0 / info.sqrt(),
        method: AbilityMethod::MaximumLikelihood,
    })
}

/// Like [`estimate_ability`], but extreme raw scores fall back to Warm's
/// weighted likelihood estimate, flagged in `method`.
pub fn estimate_ability_or_wle(pattern: &[Option<Sentiment>], difficulties: &[f64]) -> Result<AbilityEstimate> {
    match estimate_ability(pattern, difficulties) {
        Err(Error::ExtremeScore { .. }) => {
            let obs = observed(pattern, difficulties)?;
            Ok(weighted_likelihood(&obs))
        }
        other => other,
    }
}

/// Root of `Σ(x − P) + J / (2I)` with `I = ΣP(1−P)` and
/// `J = ΣP(1−P)(1−2P)`, found by bisection. The left side tends to
/// `r + 1/2` as θ → −∞ and to `r − n − 1/2` as θ → +∞, so a root exists
/// for every raw score including 0 and n.
fn weighted_likelihood(obs: &[(f64, f64)]) -> AbilityEstimate {
    let raw: f64 = obs.iter().map(|(x, _)| x).sum();
    let g = |theta: f64| {
        let (mut e, mut i, mut j) = (0.0, 0.0, 0.0);
        for &(_, b) in obs {
            let d = theta - b;
            let p = logistic(d);
            let w = p * logistic(-d);
            e += p;
            i += w;
            j += w * (1.0 - 2.0 * p);
        }
        raw - e + j / (2.0 * i)
    };
    let (b_min, b_max) = obs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, b)| {
            (lo.min(b), hi.max(b))
        });
    let (mut lo, mut hi) = (b_min - 30.0, b_max + 30.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    let theta = 0.5 * (lo + hi);
    let (_, info) = moments(obs, theta);
    AbilityEstimate {
        theta,
        se: 1.0 / info.sqrt(),
        method: AbilityMethod::WeightedLikelihood,
    }
}
