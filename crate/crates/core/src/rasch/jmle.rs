use crate::error::{Error, Result};
use crate::ingest::{ResponseMatrix, Sentiment};

use super::{logistic, DropReason, DroppedItem, DroppedRow, RaschFit};

/// Parameters are kept inside `[-PARAMETER_BOUND, PARAMETER_BOUND]` logits
/// during iteration.
pub const PARAMETER_BOUND: f64 = 10.0;

/// Largest Newton step, in logits, taken for any single parameter per sweep.
const MAX_STEP: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JmleOptions {
    pub max_iter: usize,
    /// Convergence threshold on the largest absolute score residual.
    pub tol: f64,
    /// Multiply difficulties by `(L − 1) / L` after convergence.
    pub bias_correction: bool,
}

impl Default for JmleOptions {
    fn default() -> Self {
        JmleOptions {
            max_iter: 200,
            tol: 1e-6,
            bias_correction: false,
        }
    }
}

/// Observed cells of the active sub-matrix in compressed row and column form.
struct Sparse {
    /// cells of row i: `row_cells[row_ptr[i]..row_ptr[i + 1]]` as (item, x)
    row_ptr: Vec<usize>,
    row_cells: Vec<(usize, f64)>,
    col_ptr: Vec<usize>,
    col_cells: Vec<(usize, f64)>,
    row_raw: Vec<f64>,
    col_raw: Vec<f64>,
}

impl Sparse {
    fn new(matrix: &ResponseMatrix, rows: &[usize], items: &[usize]) -> Self {
        let mut item_pos = vec![usize::MAX; matrix.n_items()];
        for (k, &j) in items.iter().enumerate() {
            item_pos[j] = k;
        }
        let mut row_ptr = vec![0];
        let mut row_cells = Vec::new();
        let mut row_raw = Vec::with_capacity(rows.len());
        let mut col_lists: Vec<Vec<(usize, f64)>> = vec![Vec::new(); items.len()];
        for (ri, &i) in rows.iter().enumerate() {
            let mut raw = 0.0;
            for (j, cell) in matrix.row(i).iter().enumerate() {
                let (Some(s), k) = (cell, item_pos[j]) else { continue };
                if k == usize::MAX {
                    continue;
                }
                let x = f64::from(s.bit());
                raw += x;
                row_cells.push((k, x));
                col_lists[k].push((ri, x));
            }
            row_ptr.push(row_cells.len());
            row_raw.push(raw);
        }
        let col_raw = col_lists.iter().map(|c| c.iter().map(|(_, x)| x).sum()).collect();
        let mut col_ptr = vec![0];
        let mut col_cells = Vec::with_capacity(row_cells.len());
        for c in col_lists {
            col_cells.extend(c);
            col_ptr.push(col_cells.len());
        }
        Sparse {
            row_ptr,
            row_cells,
            col_ptr,
            col_cells,
            row_raw,
            col_raw,
        }
    }

    fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.row_cells[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    fn col(&self, j: usize) -> &[(usize, f64)] {
        &self.col_cells[self.col_ptr[j]..self.col_ptr[j + 1]]
    }
}

fn classify(observed: usize, positives: usize) -> Option<DropReason> {
    if observed == 0 {
        Some(DropReason::AllMissing)
    } else if positives == 0 {
        Some(DropReason::AllNegative)
    } else if positives == observed {
        Some(DropReason::AllPositive)
    } else {
        None
    }
}

/// Removes items then rows whose observed responses are all missing, all 0
/// or all 1, repeating until nothing changes (dropping a row can make an
/// item extreme and vice versa).
#[allow(clippy::needless_range_loop)]
fn drop_extremes(matrix: &ResponseMatrix) -> (Vec<bool>, Vec<bool>, Vec<DroppedItem>, Vec<DroppedRow>) {
    let mut row_active = vec![true; matrix.n_rows()];
    let mut item_active = vec![true; matrix.n_items()];
    let mut dropped_items = Vec::new();
    let mut dropped_rows = Vec::new();
    loop {
        let mut changed = false;
        for j in 0..matrix.n_items() {
            if !item_active[j] {
                continue;
            }
            let (mut n, mut pos) = (0, 0);
            for i in (0..matrix.n_rows()).filter(|&i| row_active[i]) {
                if let Some(s) = matrix.get(i, j) {
                    n += 1;
                    pos += usize::from(s == Sentiment::Positive);
                }
            }
            if let Some(reason) = classify(n, pos) {
                item_active[j] = false;
                dropped_items.push(DroppedItem {
                    index: j,
                    label: matrix.items()[j].clone(),
                    reason,
                });
                changed = true;
            }
        }
        for i in 0..matrix.n_rows() {
            if !row_active[i] {
                continue;
            }
            let (mut n, mut pos) = (0, 0);
            for (j, cell) in matrix.row(i).iter().enumerate() {
                if let (true, Some(s)) = (item_active[j], cell) {
                    n += 1;
                    pos += usize::from(*s == Sentiment::Positive);
                }
            }
            if let Some(reason) = classify(n, pos) {
                row_active[i] = false;
                dropped_rows.push(DroppedRow { index: i, reason });
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    dropped_items.sort_by_key(|d| d.index);
    dropped_rows.sort_by_key(|d| d.index);
    (row_active, item_active, dropped_items, dropped_rows)
}

/// Connected components of the bipartite row–item graph, as lists of item
/// positions.
fn item_components(data: &Sparse, n_items: usize) -> Vec<Vec<usize>> {
    let n_rows = data.row_raw.len();
    let mut parent: Vec<usize> = (0..n_rows + n_items).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n_rows {
        for &(k, _) in data.row(i) {
            let (a, b) = (find(&mut parent, i), find(&mut parent, n_rows + k));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut comps: Vec<(usize, Vec<usize>)> = Vec::new();
    for k in 0..n_items {
        let root = find(&mut parent, n_rows + k);
        match comps.iter_mut().find(|(r, _)| *r == root) {
            Some((_, v)) => v.push(k),
            None => comps.push((root, vec![k])),
        }
    }
    comps.into_iter().map(|(_, v)| v).collect()
}

/// Largest absolute difference between observed and expected raw scores
/// over all active rows and items.
fn max_score_residual(data: &Sparse, theta: &[f64], b: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    let mut expected_col = vec![0.0; b.len()];
    for (i, &t) in theta.iter().enumerate() {
        let mut e = 0.0;
        for &(k, _) in data.row(i) {
            let p = logistic(t - b[k]);
            e += p;
            expected_col[k] += p;
        }
        worst = worst.max((data.row_raw[i] - e).abs());
    }
    for (k, e) in expected_col.iter().enumerate() {
        worst = worst.max((data.col_raw[k] - e).abs());
    }
    worst
}

/// Fits the Rasch model by joint maximum likelihood.
///
/// Rows and items with extreme or empty observed responses are dropped
/// first and reported. Each sweep takes one Newton step for every ability,
/// then one for every difficulty, and re-centres difficulties to mean zero
/// (shifting abilities by the same amount, which leaves the likelihood
/// unchanged). Missing cells are skipped. Iteration stops once the largest
/// absolute score residual falls below `tol`.
pub fn fit_jmle(matrix: &ResponseMatrix, opts: &JmleOptions) -> Result<RaschFit> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::Validation(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    let (row_active, item_active, dropped_items, dropped_rows) = drop_extremes(matrix);
    let rows: Vec<usize> = (0..matrix.n_rows()).filter(|&i| row_active[i]).collect();
    let items: Vec<usize> = (0..matrix.n_items()).filter(|&j| item_active[j]).collect();
    if items.len() < 2 || rows.len() < 2 {
        return Err(Error::Estimation(format!(
            "after dropping extreme and empty responses only {} item(s) and {} row(s) remain; need at least 2 of each",
            items.len(),
            rows.len()
        )));
    }

    let data = Sparse::new(matrix, &rows, &items);
    let comps = item_components(&data, items.len());
    if comps.len() > 1 {
        let named: Vec<String> = comps
            .iter()
            .map(|c| {
                let labels: Vec<&str> = c.iter().map(|&k| matrix.items()[items[k]].as_str()).collect();
                format!("{{{}}}", labels.join(", "))
            })
            .collect();
        return Err(Error::Estimation(format!(
            "data are disconnected into {} components: {}",
            comps.len(),
            named.join(" ")
        )));
    }

    let (theta, b, iterations, residual) = iterate(&data, opts);
    let converged = residual < opts.tol;

    // standard errors from the information at the maximum-likelihood solution
    let mut info_col = vec![0.0; b.len()];
    let mut person_se_active = Vec::with_capacity(theta.len());
    for (i, &t) in theta.iter().enumerate() {
        let mut info = 0.0;
        for &(k, _) in data.row(i) {
            let d = t - b[k];
            let w = logistic(d) * logistic(-d);
            info += w;
            info_col[k] += w;
        }
        person_se_active.push(1.0 / info.sqrt());
    }

    let scale = if opts.bias_correction {
        (items.len() as f64 - 1.0) / items.len() as f64
    } else {
        1.0
    };

    let mut difficulties = vec![None; matrix.n_items()];
    let mut item_se = vec![None; matrix.n_items()];
    for (k, &j) in items.iter().enumerate() {
        difficulties[j] = Some(b[k] * scale);
        item_se[j] = Some(1.0 / info_col[k].sqrt());
    }
    let mut abilities = vec![None; matrix.n_rows()];
    let mut person_se = vec![None; matrix.n_rows()];
    for (ri, &i) in rows.iter().enumerate() {
        abilities[i] = Some(theta[ri]);
        person_se[i] = Some(person_se_active[ri]);
    }

    Ok(RaschFit {
        items: matrix.items().to_vec(),
        difficulties,
        item_se,
        abilities,
        person_se,
        dropped_items,
        dropped_rows,
        converged,
        iterations,
        max_residual: residual,
        bias_corrected: opts.bias_correction,
    })
}

fn clamp_step(step: f64) -> f64 {
    step.clamp(-MAX_STEP, MAX_STEP)
}

/// Alternating Newton sweeps; returns (abilities, difficulties, sweeps, residual).
fn iterate(data: &Sparse, opts: &JmleOptions) -> (Vec<f64>, Vec<f64>, usize, f64) {
    let n_items = data.col_raw.len();
    let mut b: Vec<f64> = (0..n_items)
        .map(|k| {
            let n = (data.col_ptr[k + 1] - data.col_ptr[k]) as f64;
            let s = data.col_raw[k];
            ((n - s) / s).ln()
        })
        .collect();
    let mean = b.iter().sum::<f64>() / n_items as f64;
    b.iter_mut().for_each(|x| *x -= mean);
    let mut theta: Vec<f64> = (0..data.row_raw.len())
        .map(|i| {
            let n = data.row(i).len() as f64;
            let r = data.row_raw[i];
            (r / (n - r)).ln()
        })
        .collect();

    let mut iterations = 0;
    let mut residual = max_score_residual(data, &theta, &b);
    while residual >= opts.tol && iterations < opts.max_iter {
        for (i, t) in theta.iter_mut().enumerate() {
            let (mut e, mut v) = (0.0, 0.0);
            for &(k, _) in data.row(i) {
                let d = *t - b[k];
                let p = logistic(d);
                e += p;
                v += p * logistic(-d);
            }
            *t = (*t + clamp_step((data.row_raw[i] - e) / v)).clamp(-PARAMETER_BOUND, PARAMETER_BOUND);
        }
        for (k, bk) in b.iter_mut().enumerate() {
            let (mut e, mut v) = (0.0, 0.0);
            for &(i, _) in data.col(k) {
                let d = theta[i] - *bk;
                let p = logistic(d);
                e += p;
                v += p * logistic(-d);
            }
            *bk = (*bk + clamp_step((e - data.col_raw[k]) / v)).clamp(-PARAMETER_BOUND, PARAMETER_BOUND);
        }
        let mean = b.iter().sum::<f64>() / n_items as f64;
        b.iter_mut().for_each(|x| *x -= mean);
        theta.iter_mut().for_each(|x| *x -= mean);
        iterations += 1;
        residual = max_score_residual(data, &theta, &b);
    }
    (theta, b, iterations, residual)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: &[Vec<Option<u8>>]) -> ResponseMatrix {
        let items = (0..rows[0].len()).map(|j| format!("i{j}")).collect();
        ResponseMatrix::from_bits(items, rows).unwrap()
    }

    fn full(rows: &[&[u8]]) -> ResponseMatrix {
        matrix(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| Some(x)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn symmetric_two_by_two() {
        let fit = fit_jmle(&full(&[&[1, 0], &[0, 1]]), &JmleOptions::default()).unwrap();
        assert!(fit.converged);
        for d in &fit.difficulties {
            assert!(d.unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn extremes_are_dropped_and_reported() {
        let m = matrix(&[
            vec![Some(1), Some(0), Some(1), None],
            vec![Some(0), Some(1), Some(1), None],
            vec![Some(1), Some(1), Some(1), None],
            vec![Some(0), Some(1), Some(1), None],
            vec![Some(1), Some(0), Some(1), None],
        ]);
        let fit = fit_jmle(&m, &JmleOptions::default()).unwrap();
        let reasons: Vec<_> = fit.dropped_items.iter().map(|d| (d.index, d.reason)).collect();
        assert_eq!(reasons, [(2, DropReason::AllPositive), (3, DropReason::AllMissing)]);
        // row 2 is all-positive once item 2 is gone
        assert_eq!(fit.drop_reason_of_row(2), Some(DropReason::AllPositive));
        assert!(fit.difficulties[2].is_none() && fit.abilities[2].is_none());
        let mean = (fit.difficulties[0].unwrap() + fit.difficulties[1].unwrap()) / 2.0;
        assert!(mean.abs() < 1e-12);
    }

    #[test]
    fn too_few_after_dropping() {
        let m = full(&[&[1, 1], &[0, 0], &[1, 1]]);
        assert!(matches!(
            fit_jmle(&m, &JmleOptions::default()),
            Err(Error::Estimation(_))
        ));
    }

    #[test]
    fn disconnected_components_are_named() {
        let m = matrix(&[
            vec![Some(1), Some(0), None, None],
            vec![Some(0), Some(1), None, None],
            vec![None, None, Some(1), Some(0)],
            vec![None, None, Some(0), Some(1)],
        ]);
        let err = fit_jmle(&m, &JmleOptions::default()).unwrap_err().to_string();
        assert!(err.contains("{i0, i1}") && err.contains("{i2, i3}"), "{err}");
    }

    #[test]
    fn bias_correction_scales_difficulties() {
        let m = full(&[&[1, 0, 0], &[1, 1, 0], &[0, 1, 0], &[1, 0, 1], &[1, 1, 0]]);
        let plain = fit_jmle(&m, &JmleOptions::default()).unwrap();
        let corrected = fit_jmle(
            &m,
            &JmleOptions {
                bias_correction: true,
                ..Default::default()
            },
        )
        .unwrap();
        for (p, c) in plain.difficulties.iter().zip(&corrected.difficulties) {
            assert!((p.unwrap() * 2.0 / 3.0 - c.unwrap()).abs() < 1e-15);
        }
        assert_eq!(plain.item_se, corrected.item_se);
    }

    #[test]
    fn iteration_cap_reports_nonconvergence() {
        let m = full(&[&[1, 0, 0], &[1, 1, 0], &[0, 1, 0], &[1, 0, 1], &[1, 1, 0]]);
        let fit = fit_jmle(
            &m,
            &JmleOptions {
                max_iter: 1,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(!fit.converged);
        assert_eq!(fit.iterations, 1);
        assert!(fit.max_residual >= 1e-6);
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        let m = full(&[&[1, 0], &[0, 1]]);
        assert!(fit_jmle(
            &m,
            &JmleOptions {
                tol: 0.0,
                ..Default::default()
            }
        )
        .is_err());
    }
}
