//! Independent reference computations used by the integration and
//! acceptance tests. Nothing here calls into the library's estimators.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Result of the brute-force Rasch grid search.
#[derive(Debug, Clone)]
pub struct GridOptimum {
    pub difficulties: Vec<f64>,
    pub abilities: Vec<f64>,
    pub log_likelihood: f64,
}

/// Exhaustive grid maximisation of the joint Rasch log-likelihood for a
/// complete three-item matrix, under mean-zero difficulties.
///
/// Abilities and difficulties range over `[-4, 4]` at `step`. With three
/// items the centering constraint leaves two free difficulties; the third is
/// `-(b1 + b2)` and must also lie on the grid. For each difficulty triple
/// every person's ability is found by scanning the full grid.
pub fn rasch_grid_search_3_items(data: &[[u8; 3]], step: f64) -> GridOptimum {
    let n = (8.0 / step).round() as i64; // grid indices 0..=n
    let grid = |k: i64| -4.0 + step * k as f64;
    // softplus of (theta - b) for every index difference
    let softplus: Vec<f64> = (-n..=n).map(|d| (step * d as f64).exp().ln_1p()).collect();
    let sp = |t: i64, u: i64| softplus[(t - u + n) as usize];

    let col_sums: Vec<f64> = (0..3).map(|j| data.iter().map(|r| r[j] as f64).sum()).collect();

    // persons with equal raw scores share the same optimal ability
    let raw: Vec<usize> = data.iter().map(|r| r.iter().map(|&x| x as usize).sum()).collect();
    let mut classes: Vec<usize> = raw.clone();
    classes.sort_unstable();
    classes.dedup();
    let counts: Vec<f64> = classes
        .iter()
        .map(|c| raw.iter().filter(|&&r| r == *c).count() as f64)
        .collect();

    let mut best = f64::NEG_INFINITY;
    let mut best_u = [0i64; 3];
    let mut best_t = vec![0i64; classes.len()];
    let mut t_scratch = vec![0i64; classes.len()];

    for u1 in 0..=n {
        for u2 in 0..=n {
            // b3 = -(b1 + b2): index 3n/2 - u1 - u2 (grid is centred on 0)
            let u3 = 3 * n / 2 - u1 - u2;
            if !(0..=n).contains(&u3) {
                continue;
            }
            let u = [u1, u2, u3];
            let mut ll = -(0..3).map(|j| col_sums[j] * grid(u[j])).sum::<f64>();
            for (c, &r) in classes.iter().enumerate() {
                let r = r as f64;
                let mut class_best = f64::NEG_INFINITY;
                for t in 0..=n {
                    let v = r * grid(t) - sp(t, u1) - sp(t, u2) - sp(t, u3);
                    if v > class_best {
                        class_best = v;
                        t_scratch[c] = t;
                    }
                }
                ll += counts[c] * class_best;
            }
            if ll > best {
                best = ll;
                best_u = u;
                best_t.copy_from_slice(&t_scratch);
            }
        }
    }
    let best_t: Vec<i64> = raw
        .iter()
        .map(|r| best_t[classes.iter().position(|c| c == r).unwrap()])
        .collect();
    GridOptimum {
        difficulties: best_u.iter().map(|&u| grid(u)).collect(),
        abilities: best_t.iter().map(|&t| grid(t)).collect(),
        log_likelihood: best,
    }
}

/// Samples a complete persons × items matrix from the Rasch model.
pub fn simulate_rasch(abilities: &[f64], difficulties: &[f64], rng: &mut ChaCha8Rng) -> Vec<Vec<u8>> {
    abilities
        .iter()
        .map(|&t| {
            difficulties
                .iter()
                .map(|&b| {
                    let p = 1.0 / (1.0 + (b - t).exp());
                    u8::from(rng.random::<f64>() < p)
                })
                .collect()
        })
        .collect()
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

pub fn standard_normals(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Fraction of (positive, negative) pairs ordered correctly by score,
/// ties counting one half, by enumerating every pair.
pub fn auc_by_pairs(scores: &[f64], positive: &[bool]) -> f64 {
    let mut good = 0.0;
    let mut pairs = 0.0;
    for (i, &si) in scores.iter().enumerate() {
        if !positive[i] {
            continue;
        }
        for (k, &sk) in scores.iter().enumerate() {
            if positive[k] {
                continue;
            }
            pairs += 1.0;
            if si > sk {
                good += 1.0;
            } else if si == sk {
                good += 0.5;
            }
        }
    }
    good / pairs
}

/// Weighted TOPSIS written out step by step with plain loops.
/// `benefit[j]` is true when larger values of criterion j are preferred.
/// Returns (closeness scores, d_best, d_worst).
pub fn topsis_by_hand(values: &[Vec<f64>], weights: &[f64], benefit: &[bool]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let m = values.len();
    let c = weights.len();
    let wsum: f64 = weights.iter().sum();
    let mut v = vec![vec![0.0; c]; m];
    for j in 0..c {
        let mut ss = 0.0;
        for row in values {
            ss += row[j] * row[j];
        }
        let norm = ss.sqrt();
        for i in 0..m {
            v[i][j] = values[i][j] / norm * (weights[j] / wsum);
        }
    }
    let mut best = vec![0.0; c];
    let mut worst = vec![0.0; c];
    for j in 0..c {
        let mut hi = f64::NEG_INFINITY;
        let mut lo = f64::INFINITY;
        for row in &v {
            hi = hi.max(row[j]);
            lo = lo.min(row[j]);
        }
        if benefit[j] {
            best[j] = hi;
            worst[j] = lo;
        } else {
            best[j] = lo;
            worst[j] = hi;
        }
    }
    let mut scores = Vec::new();
    let mut dbs = Vec::new();
    let mut dws = Vec::new();
    for row in &v {
        let mut db = 0.0;
        let mut dw = 0.0;
        for j in 0..c {
            db += (row[j] - best[j]).powi(2);
            dw += (row[j] - worst[j]).powi(2);
        }
        let (db, dw) = (db.sqrt(), dw.sqrt());
        scores.push(dw / (db + dw));
        dbs.push(db);
        dws.push(dw);
    }
    (scores, dbs, dws)
}
