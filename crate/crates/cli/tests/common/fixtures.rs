//! Seeded synthetic inputs for the command-line tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub struct SimulatedCorpus {
    pub csv: String,
    pub records: usize,
    /// Generating difficulty of each month, in calendar order.
    pub difficulties: Vec<f64>,
}

const POSITIVE_WORDS: [&str; 4] = ["investimento", "sustentabilidade", "transparencia", "reducao"];
const NEGATIVE_WORDS: [&str; 4] = ["vazamento", "multa", "corrupcao", "acidente"];

/// A labeled corpus over `n_months` months from January of `first_year`.
///
/// Row `i` of every month shares one latent level `θ_i ~ N(0, 1)`; month
/// `j` has difficulty spaced evenly over [-1.5, 1.5]. The record at row `i`
/// of month `j` is positive with probability logistic(θ_i - b_j).
pub fn simulate_corpus(
    first_year: i32,
    n_months: usize,
    per_month: impl Fn(usize) -> usize,
    seed: u64,
) -> SimulatedCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts: Vec<usize> = (0..n_months).map(&per_month).collect();
    let max_rows = counts.iter().copied().max().unwrap_or(0);
    let abilities: Vec<f64> = (0..max_rows).map(|_| StandardNormal.sample(&mut rng)).collect();
    let difficulties: Vec<f64> = (0..n_months)
        .map(|j| {
            if n_months == 1 {
                0.0
            } else {
                -1.5 + 3.0 * j as f64 / (n_months - 1) as f64
            }
        })
        .collect();

    let mut csv = String::from("id,date,text,label,dimension\n");
    let mut n = 0;
    for (j, &count) in counts.iter().enumerate() {
        let year = first_year + (j / 12) as i32;
        let month = j % 12 + 1;
        for (i, theta) in abilities.iter().take(count).enumerate() {
            let p = 1.0 / (1.0 + (-(theta - difficulties[j])).exp());
            let positive = rng.random_bool(p);
            let day = 1 + i * 28 / count;
            let words = if positive { &POSITIVE_WORDS } else { &NEGATIVE_WORDS };
            let dim = ["E", "S", "G"][n % 3];
            n += 1;
            csv.push_str(&format!(
                "n{n:05},{year}-{month:02}-{day:02},noticia sobre {} da empresa,{},{dim}\n",
                words[i % 4],
                u8::from(positive)
            ));
        }
    }
    SimulatedCorpus {
        csv,
        records: n,
        difficulties,
    }
}

pub fn small_grid() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("lr", vec!["1e-5", "2e-5"]),
        ("layers", vec!["2", "5"]),
        ("epochs", vec!["2", "10"]),
    ]
}

pub fn table2_grid() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("lr", vec!["1e-5", "2e-5", "3e-5"]),
        ("layers", vec!["2", "5", "10"]),
        ("hidden", vec!["256", "512", "768"]),
        ("batch", vec!["5", "10", "20"]),
        ("epochs", vec!["2", "5", "10"]),
        ("max_len", vec!["50", "100", "200"]),
    ]
}

pub const METRIC_COLUMNS: &str =
    "train_loss,train_accuracy,val_loss,val_accuracy,val_precision,val_recall,val_f1,val_auc_roc1,val_auc_roc2";

/// A metric log with one row per grid combination and random metrics. When
/// `winner` names a combination (`name=value` pairs joined by `,`), that row
/// gets the best value on every criterion.
pub fn metric_log_csv(grid: &[(&str, Vec<&str>)], seed: u64, winner: Option<&str>) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<&str> = grid.iter().map(|(n, _)| *n).collect();
    let mut csv = format!("id,{},{METRIC_COLUMNS}\n", names.join(","));
    let total: usize = grid.iter().map(|(_, v)| v.len()).product();
    for k in 0..total {
        // odometer over the grid, first parameter slowest
        let mut rest = k;
        let mut values = vec![""; grid.len()];
        for (p, (_, vals)) in grid.iter().enumerate().rev() {
            values[p] = vals[rest % vals.len()];
            rest /= vals.len();
        }
        let combo: Vec<String> = names.iter().zip(&values).map(|(n, v)| format!("{n}={v}")).collect();
        let metrics: Vec<String> = if winner == Some(combo.join(",").as_str()) {
            vec!["0.05", "0.99", "0.08", "0.98", "0.99", "0.98", "0.985", "0.99", "0.99"]
                .into_iter()
                .map(String::from)
                .collect()
        } else {
            (0..9)
                .map(|m| {
                    let v: f64 = if m == 0 || m == 2 {
                        rng.random_range(0.2..1.2)
                    } else {
                        rng.random_range(0.5..0.95)
                    };
                    format!("{v:.4}")
                })
                .collect()
        };
        csv.push_str(&format!(
            "run-{:03},{},{}\n",
            k + 1,
            values.join(","),
            metrics.join(",")
        ));
    }
    csv
}
