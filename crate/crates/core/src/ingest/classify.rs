use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Corpus, Dimension, NewsRecord, Sentiment};
use crate::error::{Error, Result};

/// Scores below this threshold label a record negative.
pub const LABEL_THRESHOLD: f64 = 0.5;

/// Maps a news text to a real score; records scoring at least 0.5 are
/// labelled positive.
pub trait TextScorer {
    fn score(&self, text: &str) -> std::result::Result<f64, String>;
}

impl<F> TextScorer for F
where
    F: Fn(&str) -> std::result::Result<f64, String>,
{
    fn score(&self, text: &str) -> std::result::Result<f64, String> {
        self(text)
    }
}

/// Labels every unlabelled record with `scorer`; labelled records pass
/// through untouched.
pub fn classify_with_hook(corpus: &Corpus, scorer: &dyn TextScorer) -> Result<Corpus> {
    let records = corpus
        .records()
        .iter()
        .map(|r| {
            if r.label.is_some() {
                return Ok(r.clone());
            }
            let s = scorer.score(&r.text).map_err(|message| Error::Scorer {
                id: r.id.clone(),
                message,
            })?;
            if !s.is_finite() {
                return Err(Error::Scorer {
                    id: r.id.clone(),
                    message: format!("non-finite score {s}"),
                });
            }
            let label = if s >= LABEL_THRESHOLD {
                Sentiment::Positive
            } else {
                Sentiment::Negative
            };
            Ok(NewsRecord {
                label: Some(label),
                ..r.clone()
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Corpus::new(records, corpus.period())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionDefinition {
    pub definition: String,
    pub positive: String,
    pub negative: String,
}

/// ESG dimension definitions: dimension → definition and the texts
/// describing positive and negative news.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EsgDefinitions(pub BTreeMap<Dimension, DimensionDefinition>);

impl EsgDefinitions {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// The bundled Portuguese definitions.
    pub fn builtin() -> Self {
        Self::from_json(include_str!("../../data/esg_definitions.json")).expect("bundled definitions are valid JSON")
    }
}

/// Lowercases and splits on anything that is not a letter or digit.
pub fn tokenize(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
}

/// Counts positive-lexicon hits minus negative-lexicon hits and maps the
/// difference through the logistic function.
#[derive(Debug, Clone, PartialEq)]
pub struct LexiconScorer {
    positive: BTreeSet<String>,
    negative: BTreeSet<String>,
}

impl LexiconScorer {
    /// Shortest token kept when deriving a lexicon from definition texts.
    pub const MIN_TOKEN_LEN: usize = 4;

    pub fn new<I, J, S, T>(positive: I, negative: J) -> Self
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: AsRef<str>,
        T: AsRef<str>,
    {
        LexiconScorer {
            positive: positive.into_iter().map(|s| s.as_ref().to_lowercase()).collect(),
            negative: negative.into_iter().map(|s| s.as_ref().to_lowercase()).collect(),
        }
    }

    /// Positive lexicon = tokens of the positive texts that never occur in a
    /// negative text (and vice versa), ignoring tokens shorter than
    /// [`Self::MIN_TOKEN_LEN`] characters.
    pub fn from_definitions(defs: &EsgDefinitions) -> Self {
        let collect = |pick: fn(&DimensionDefinition) -> &str| -> BTreeSet<String> {
            defs.0
                .values()
                .flat_map(|d| tokenize(pick(d)).collect::<Vec<_>>())
                .filter(|t| t.chars().count() >= Self::MIN_TOKEN_LEN)
                .collect()
        };
        let pos = collect(|d| &d.positive);
        let neg = collect(|d| &d.negative);
        LexiconScorer {
            positive: pos.difference(&neg).cloned().collect(),
            negative: neg.difference(&pos).cloned().collect(),
        }
    }

    pub fn positive(&self) -> &BTreeSet<String> {
        &self.positive
    }

    pub fn negative(&self) -> &BTreeSet<String> {
        &self.negative
    }

    /// Positive hits minus negative hits.
    pub fn net_hits(&self, text: &str) -> i64 {
        tokenize(text)
            .map(|t| i64::from(self.positive.contains(&t)) - i64::from(self.negative.contains(&t)))
            .sum()
    }
}

impl TextScorer for LexiconScorer {
    fn score(&self, text: &str) -> std::result::Result<f64, String> {
        let h = self.net_hits(text) as f64;
        Ok(1.0 / (1.0 + (-h).exp()))
    }
}
