mod common;

use common::oracles::{linspace, rasch_grid_search_3_items, rng, simulate_rasch, standard_normals};
use esg_irt::ingest::{ResponseMatrix, Sentiment};
use esg_irt::rasch::{estimate_ability, fit_jmle, icc, iic, item_fit, JmleOptions, RaschFit};
use proptest::prelude::*;

const FIXTURE_5X3: [[u8; 3]; 5] = [[1, 0, 0], [1, 1, 0], [0, 1, 0], [1, 0, 1], [1, 1, 0]];

/// Brute-force grid optimum of the joint likelihood for `FIXTURE_5X3`
/// (step 0.01, mean-zero difficulties), computed by
/// `rasch_grid_search_3_items` and frozen here.
const ORACLE_5X3_DIFFICULTIES: [f64; 3] = [-1.51, -0.31, 1.82];

fn to_matrix(rows: &[Vec<u8>]) -> ResponseMatrix {
    let items = (0..rows[0].len()).map(|j| format!("item{j:02}")).collect();
    let bits: Vec<Vec<Option<u8>>> = rows.iter().map(|r| r.iter().map(|&x| Some(x)).collect()).collect();
    ResponseMatrix::from_bits(items, &bits).unwrap()
}

fn fixture() -> ResponseMatrix {
    to_matrix(&FIXTURE_5X3.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

#[test]
fn fixture_matches_frozen_oracle() {
    let fit = fit_jmle(&fixture(), &JmleOptions::default()).unwrap();
    assert!(fit.converged);
    for (got, want) in fit.difficulties.iter().zip(ORACLE_5X3_DIFFICULTIES) {
        assert!((got.unwrap() - want).abs() < 1e-2, "{got:?} vs {want}");
    }
}

#[test]
fn frozen_oracle_values_reproduce() {
    let o = rasch_grid_search_3_items(&FIXTURE_5X3, 0.01);
    for (got, want) in o.difficulties.iter().zip(ORACLE_5X3_DIFFICULTIES) {
        assert!((got - want).abs() < 1e-9);
    }
}

#[test]
fn first_order_conditions_hold() {
    let mut r = rng(11);
    let abilities = standard_normals(300, &mut r);
    let data = simulate_rasch(&abilities, &linspace(-1.5, 1.5, 8), &mut r);
    let m = to_matrix(&data);
    let opts = JmleOptions::default();
    let fit = fit_jmle(&m, &opts).unwrap();
    assert!(fit.converged);
    for j in 0..m.n_items() {
        let Some(b) = fit.difficulties[j] else { continue };
        let resid: f64 = (0..m.n_rows())
            .filter_map(|i| Some((m.get(i, j)?, fit.abilities[i]?)))
            .map(|(x, t)| f64::from(x.bit()) - icc(t, b).unwrap())
            .sum();
        assert!(resid.abs() < opts.tol, "item {j}: {resid}");
    }
    let mean: f64 = fit.difficulties.iter().flatten().sum::<f64>() / 8.0;
    assert!(mean.abs() < 1e-9);
    assert!(fit
        .item_se
        .iter()
        .flatten()
        .chain(fit.person_se.iter().flatten())
        .all(|s| s.is_finite() && *s > 0.0));
}

#[test]
fn recovers_generating_difficulties() {
    let mut r = rng(2024);
    let truth = linspace(-2.0, 2.0, 12);
    let abilities = standard_normals(2000, &mut r);
    let m = to_matrix(&simulate_rasch(&abilities, &truth, &mut r));
    let fit = fit_jmle(
        &m,
        &JmleOptions {
            bias_correction: true,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(fit.converged);
    let rmse = (fit
        .difficulties
        .iter()
        .zip(&truth)
        .map(|(b, t)| (b.unwrap() - t).powi(2))
        .sum::<f64>()
        / 12.0)
        .sqrt();
    assert!(rmse < 0.1, "rmse {rmse}");
}

#[test]
fn permutation_invariance_and_determinism() {
    let mut r = rng(5);
    let abilities = standard_normals(400, &mut r);
    let data = simulate_rasch(&abilities, &linspace(-1.0, 1.5, 6), &mut r);
    let m = to_matrix(&data);
    let opts = JmleOptions::default();
    let base = fit_jmle(&m, &opts).unwrap();
    assert_eq!(base, fit_jmle(&m, &opts).unwrap());

    // reverse rows, rotate columns
    let col_perm = [3, 5, 0, 2, 1, 4];
    let permuted: Vec<Vec<Option<u8>>> = data
        .iter()
        .rev()
        .map(|row| col_perm.iter().map(|&j| Some(row[j])).collect())
        .collect();
    let items: Vec<String> = col_perm.iter().map(|&j| m.items()[j].clone()).collect();
    let pm = ResponseMatrix::from_bits(items, &permuted).unwrap();
    let pfit = fit_jmle(&pm, &opts).unwrap();
    for (k, &j) in col_perm.iter().enumerate() {
        assert!((pfit.difficulties[k].unwrap() - base.difficulties[j].unwrap()).abs() < 1e-6);
    }
    let n = data.len();
    for i in 0..n {
        match (pfit.abilities[n - 1 - i], base.abilities[i]) {
            (Some(a), Some(b)) => assert!((a - b).abs() < 1e-6),
            (a, b) => assert_eq!(a, b),
        }
    }
}

#[test]
fn missing_cells_are_tolerated() {
    let mut r = rng(77);
    let abilities = standard_normals(1000, &mut r);
    let truth = linspace(-1.5, 1.5, 12);
    let data = simulate_rasch(&abilities, &truth, &mut r);
    // knock out a deterministic quarter of the cells
    let bits: Vec<Vec<Option<u8>>> = data
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &x)| ((i + 3 * j) % 4 != 0).then_some(x))
                .collect()
        })
        .collect();
    let m = ResponseMatrix::from_bits((0..12).map(|j| format!("m{j}")).collect(), &bits).unwrap();
    let fit = fit_jmle(
        &m,
        &JmleOptions {
            bias_correction: true,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(fit.converged);
    for (b, t) in fit.difficulties.iter().zip(&truth) {
        assert!((b.unwrap() - t).abs() < 0.25, "{b:?} vs {t}");
    }
}

#[test]
fn mean_squares_near_one_under_the_model() {
    // evaluated at the generating parameters: the expectation of both
    // mean squares is exactly 1
    let mut r = rng(99);
    let abilities = standard_normals(20_000, &mut r);
    let truth = linspace(-2.0, 2.0, 12);
    let m = to_matrix(&simulate_rasch(&abilities, &truth, &mut r));
    let known = RaschFit::from_parameters(
        m.items().to_vec(),
        truth.iter().map(|&b| Some(b)).collect(),
        abilities.iter().map(|&t| Some(t)).collect(),
    )
    .unwrap();
    let stats = item_fit(&m, &known).unwrap();
    for s in stats.items.iter().flatten() {
        assert!((0.9..=1.1).contains(&s.infit), "infit {}", s.infit);
        assert!((0.9..=1.1).contains(&s.outfit), "outfit {}", s.outfit);
    }
}

#[test]
fn inverted_item_misfits() {
    let mut r = rng(3);
    let abilities: Vec<f64> = standard_normals(200, &mut r).iter().map(|z| 1.5 * z).collect();
    let truth = linspace(-1.0, 1.0, 6);
    let mut data = simulate_rasch(&abilities, &truth, &mut r);
    for row in data.iter_mut() {
        row[2] = 1 - row[2];
    }
    let m = to_matrix(&data);
    let fit = fit_jmle(&m, &JmleOptions::default()).unwrap();
    let stats = item_fit(&m, &fit).unwrap();
    for (j, s) in stats.items.iter().enumerate() {
        let s = s.unwrap();
        if j == 2 {
            assert!(s.outfit > 1.5, "inverted item outfit {}", s.outfit);
        } else {
            assert!(s.outfit < 1.3, "item {j} outfit {}", s.outfit);
        }
    }
}

#[test]
fn parameters_fit_reproduces_ability_estimates() {
    let fit = fit_jmle(&fixture(), &JmleOptions::default()).unwrap();
    let b: Vec<f64> = fit.difficulties.iter().map(|d| d.unwrap()).collect();
    let m = fixture();
    for i in 0..m.n_rows() {
        let a = estimate_ability(m.row(i), &b).unwrap();
        assert!((a.theta - fit.abilities[i].unwrap()).abs() < 1e-5);
    }
    let known = RaschFit::from_parameters(m.items().to_vec(), fit.difficulties.clone(), fit.abilities.clone()).unwrap();
    assert_eq!(item_fit(&m, &known).unwrap(), item_fit(&m, &fit).unwrap());
}

proptest! {
    #[test]
    fn information_is_p_times_one_minus_p(theta in -50.0f64..50.0, b in -50.0f64..50.0) {
        let p = icc(theta, b).unwrap();
        prop_assert!((iic(theta, b).unwrap() - p * (1.0 - p)).abs() <= 1e-12);
        prop_assert!(iic(theta, b).unwrap() <= 0.25);
    }

    #[test]
    fn logistic_point_symmetry(b in -20.0f64..20.0, d in -30.0f64..30.0) {
        prop_assert!((icc(b + d, b).unwrap() + icc(b - d, b).unwrap() - 1.0).abs() < 1e-14);
        prop_assert!((iic(b + d, b).unwrap() - iic(b - d, b).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn icc_is_monotone(theta in -10.0f64..10.0, b in -10.0f64..10.0, h in 0.01f64..2.0) {
        prop_assert!(icc(theta + h, b).unwrap() > icc(theta, b).unwrap());
        prop_assert!(icc(theta, b + h).unwrap() < icc(theta, b).unwrap());
    }

    #[test]
    fn ability_increases_with_raw_score(
        b in proptest::collection::vec(-3.0f64..3.0, 3..10),
        order in any::<u64>(),
    ) {
        let n = b.len();
        // a fixed random ordering decides which items become positive first
        let mut idx: Vec<usize> = (0..n).collect();
        let mut state = order;
        for k in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            idx.swap(k, (state >> 33) as usize % (k + 1));
        }
        let mut prev = f64::NEG_INFINITY;
        for r in 1..n {
            let mut pattern = vec![Some(Sentiment::Negative); n];
            for &j in &idx[..r] {
                pattern[j] = Some(Sentiment::Positive);
            }
            let theta = estimate_ability(&pattern, &b).unwrap().theta;
            prop_assert!(theta > prev);
            prev = theta;
        }
    }
}
