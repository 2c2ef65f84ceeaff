//! Labelled news corpora and the month-as-item response matrix.
//!
//! A [`Corpus`] is an ordered list of [`NewsRecord`]s covering an inclusive
//! [`Period`] of calendar months. [`build_response_matrix`] lays the labels
//! out as a dichotomous matrix with one column per month and one row per
//! within-month ordinal position; months with fewer records are padded
//! with missing cells.

mod classify;
mod matrix;
mod parse;
mod split;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use classify::{
    classify_with_hook, DimensionDefinition, EsgDefinitions, LexiconScorer, TextScorer, LABEL_THRESHOLD,
};
pub use matrix::{build_response_matrix, monthly_summary, MonthSummary, ResponseMatrix};
pub use parse::{parse_corpus, read_corpus, write_corpus_csv, CorpusFormat};
pub use split::{split_train_val, train_size};

/// Binary ESG sentiment of one news item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sentiment {
    Negative,
    Positive,
}

impl Sentiment {
    pub fn from_bit(bit: u8) -> Option<Self> {
        match bit {
            0 => Some(Sentiment::Negative),
            1 => Some(Sentiment::Positive),
            _ => None,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Sentiment::Negative => 0,
            Sentiment::Positive => 1,
        }
    }

    pub fn is_positive(self) -> bool {
        self == Sentiment::Positive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dimension {
    Environment,
    Social,
    Governance,
}

impl Dimension {
    pub fn as_str(self) -> &'static str {
        match self {
            Dimension::Environment => "Environment",
            Dimension::Social => "Social",
            Dimension::Governance => "Governance",
        }
    }
}

impl FromStr for Dimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "environment" | "environmental" | "e" => Ok(Dimension::Environment),
            "social" | "s" => Ok(Dimension::Social),
            "governance" | "g" => Ok(Dimension::Governance),
            other => Err(Error::Validation(format!("unknown ESG dimension `{other}`"))),
        }
    }
}

/// A calendar month, ordered chronologically and printed as `YYYY-MM`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Month {
    year: i32,
    month: u32,
}

impl Month {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) || !(0..=9999).contains(&year) {
            return Err(Error::Validation(format!("invalid month {year}-{month}")));
        }
        Ok(Month { year, month })
    }

    pub fn of(date: NaiveDate) -> Self {
        Month {
            year: date.year(),
            month: date.month(),
        }
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn month(self) -> u32 {
        self.month
    }

    pub fn succ(self) -> Self {
        if self.month == 12 {
            Month {
                year: self.year + 1,
                month: 1,
            }
        } else {
            Month {
                year: self.year,
                month: self.month + 1,
            }
        }
    }
}

impl fmt::Display for Month {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for Month {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Validation(format!("`{s}` is not a YYYY-MM month"));
        let (y, m) = s.trim().split_once('-').ok_or_else(bad)?;
        if y.len() != 4 || m.len() != 2 {
            return Err(bad());
        }
        let year = y.parse().map_err(|_| bad())?;
        let month = m.parse().map_err(|_| bad())?;
        Month::new(year, month)
    }
}

impl Serialize for Month {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Month {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Inclusive range of months.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Period {
    pub start: Month,
    pub end: Month,
}

impl Period {
    pub fn new(start: Month, end: Month) -> Result<Self> {
        if end < start {
            return Err(Error::Validation(format!("period end {end} precedes start {start}")));
        }
        Ok(Period { start, end })
    }

    pub fn contains(&self, month: Month) -> bool {
        self.start <= month && month <= self.end
    }

    /// Every month of the period in calendar order.
    pub fn months(&self) -> Vec<Month> {
        let mut out = vec![self.start];
        let mut m = self.start;
        while m < self.end {
            m = m.succ();
            out.push(m);
        }
        out
    }
}

impl FromStr for Period {
    type Err = Error;

    /// Accepts `YYYY-MM..YYYY-MM` or a bare year `YYYY`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once("..") {
            return Period::new(a.parse()?, b.parse()?);
        }
        let year: i32 = s
            .parse()
            .map_err(|_| Error::Validation(format!("`{s}` is neither YYYY-MM..YYYY-MM nor YYYY")))?;
        Period::new(Month::new(year, 1)?, Month::new(year, 12)?)
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// One dated news item, optionally labelled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewsRecord {
    pub id: String,
    pub date: NaiveDate,
    pub text: String,
    pub label: Option<Sentiment>,
    pub dimension: Option<Dimension>,
}

impl NewsRecord {
    pub fn month(&self) -> Month {
        Month::of(self.date)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    records: Vec<NewsRecord>,
    period: Option<Period>,
}

impl Corpus {
    /// Builds a corpus, inferring the period as min..max month when none is
    /// given. An empty corpus with no explicit period has no period.
    pub fn new(records: Vec<NewsRecord>, period: Option<Period>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(records.len());
        for r in &records {
            if !seen.insert(r.id.as_str()) {
                return Err(Error::Validation(format!("duplicate record id `{}`", r.id)));
            }
        }
        let period = match period {
            Some(p) => {
                if let Some(r) = records.iter().find(|r| !p.contains(r.month())) {
                    return Err(Error::Validation(format!(
                        "record `{}` dated {} falls outside period {p}",
                        r.id, r.date
                    )));
                }
                Some(p)
            }
            None => {
                let first = records.iter().map(NewsRecord::month).min();
                let last = records.iter().map(NewsRecord::month).max();
                match (first, last) {
                    (Some(a), Some(b)) => Some(Period::new(a, b)?),
                    _ => None,
                }
            }
        };
        Ok(Corpus { records, period })
    }

    pub fn records(&self) -> &[NewsRecord] {
        &self.records
    }

    pub fn period(&self) -> Option<Period> {
        self.period
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Re-scopes the corpus to `period`; fails if a record falls outside it.
    pub fn with_period(self, period: Period) -> Result<Self> {
        Corpus::new(self.records, Some(period))
    }

    /// Ids of records that carry no label, in corpus order.
    pub fn unlabeled_ids(&self) -> Vec<&str> {
        self.records
            .iter()
            .filter(|r| r.label.is_none())
            .map(|r| r.id.as_str())
            .collect()
    }

    pub fn into_records(self) -> Vec<NewsRecord> {
        self.records
    }
}
