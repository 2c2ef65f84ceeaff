use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Corpus;
use crate::error::{Error, Result};

/// Number of training records for `n` records at `fraction`, rounding
/// half up (365 at 0.9 gives 329).
pub fn train_size(n: usize, fraction: f64) -> usize {
    let exact = n as f64 * fraction;
    // absorb representation error so that e.g. 328.49999999999994 still rounds up
    let k = (exact + 0.5 + exact.abs() * 1e-12).floor();
    (k.max(0.0) as usize).min(n)
}

/// Splits a corpus into train and validation parts.
///
/// Membership depends only on the set of record ids, the fraction and the
/// seed: ids are sorted before a seeded shuffle, so reordering the input
/// leaves the partition unchanged. Both parts keep input order and inherit
/// the parent period.
pub fn split_train_val(corpus: &Corpus, train_fraction: f64, seed: u64) -> Result<(Corpus, Corpus)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Validation(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    if corpus.is_empty() {
        return Err(Error::Validation("cannot split an empty corpus".into()));
    }

    let mut ids: Vec<&str> = corpus.records().iter().map(|r| r.id.as_str()).collect();
    ids.sort_unstable();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ids.shuffle(&mut rng);
    let k = train_size(ids.len(), train_fraction);
    let train_ids: HashSet<&str> = ids[..k].iter().copied().collect();

    let (train, val): (Vec<_>, Vec<_>) = corpus
        .records()
        .iter()
        .cloned()
        .partition(|r| train_ids.contains(r.id.as_str()));
    Ok((Corpus::new(train, corpus.period())?, Corpus::new(val, corpus.period())?))
}
