use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::Serialize;

use super::{Corpus, Month, Sentiment};
use crate::error::{Error, Result};

/// Rows × items dichotomous matrix with missing cells, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponseMatrix {
    items: Vec<String>,
    n_rows: usize,
    cells: Vec<Option<Sentiment>>,
}

impl ResponseMatrix {
    pub fn new(items: Vec<String>, rows: Vec<Vec<Option<Sentiment>>>) -> Result<Self> {
        let n_items = items.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n_items) {
            return Err(Error::Validation(format!(
                "row {} has {} cells, expected {n_items}",
                i + 1,
                r.len()
            )));
        }
        Ok(ResponseMatrix {
            items,
            n_rows: rows.len(),
            cells: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from 0/1 bits, `None` marking missing cells.
    pub fn from_bits(items: Vec<String>, rows: &[Vec<Option<u8>>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| match c {
                        None => Ok(None),
                        Some(b) => Sentiment::from_bit(*b)
                            .map(Some)
                            .ok_or_else(|| Error::Validation(format!("cell value {b} is not 0 or 1"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        ResponseMatrix::new(items, rows)
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn n_items(&self) -> usize {
        self.items.len()
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn get(&self, row: usize, item: usize) -> Option<Sentiment> {
        self.cells[row * self.items.len() + item]
    }

    pub fn row(&self, row: usize) -> &[Option<Sentiment>] {
        let w = self.items.len();
        &self.cells[row * w..(row + 1) * w]
    }

    /// Non-missing count per column.
    pub fn column_counts(&self) -> Vec<usize> {
        (0..self.n_items())
            .map(|j| (0..self.n_rows).filter(|&i| self.get(i, j).is_some()).count())
            .collect()
    }

    /// Keeps only the listed columns, in the given order.
    pub fn select_items(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&j| j >= self.n_items()) {
            return Err(Error::Validation(format!("item index {bad} out of range")));
        }
        let items = indices.iter().map(|&j| self.items[j].clone()).collect();
        let rows = (0..self.n_rows)
            .map(|i| indices.iter().map(|&j| self.get(i, j)).collect())
            .collect();
        ResponseMatrix::new(items, rows)
    }

    /// Writes `row_id,<item>...` with 1-based row ids and empty missing cells.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let mut header = vec!["row_id".to_string()];
        header.extend(self.items.iter().cloned());
        wtr.write_record(&header)?;
        for i in 0..self.n_rows {
            let mut rec = vec![(i + 1).to_string()];
            rec.extend(
                self.row(i)
                    .iter()
                    .map(|c| c.map(|s| s.bit().to_string()).unwrap_or_default()),
            );
            wtr.write_record(&rec)?;
        }
        wtr.flush().map_err(|e| Error::io("<matrix output>", e))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.get(0) != Some("row_id") {
            return Err(Error::Validation("matrix CSV must start with a `row_id` column".into()));
        }
        let items: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
            if rec.len() != items.len() + 1 {
                return Err(Error::Parse {
                    row: line,
                    message: format!("expected {} fields, found {}", items.len() + 1, rec.len()),
                });
            }
            let row = rec
                .iter()
                .skip(1)
                .map(|cell| match cell {
                    "" => Ok(None),
                    "0" => Ok(Some(Sentiment::Negative)),
                    "1" => Ok(Some(Sentiment::Positive)),
                    other => Err(Error::Parse {
                        row: line,
                        message: format!("cell `{other}` is not 0, 1 or empty"),
                    }),
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        ResponseMatrix::new(items, rows)
    }
}

/// Lays out corpus labels with one column per month of the period.
///
/// Within each month labels fill rows top-down in record order; shorter
/// months are padded with missing cells and months without records become
/// all-missing columns.
pub fn build_response_matrix(corpus: &Corpus) -> Result<ResponseMatrix> {
    let unlabeled = corpus.unlabeled_ids();
    if !unlabeled.is_empty() {
        return Err(Error::Validation(format!(
            "unlabeled records: {}",
            unlabeled.join(", ")
        )));
    }
    let period = corpus
        .period()
        .ok_or_else(|| Error::Validation("empty period: corpus has no records and no period".into()))?;

    let months = period.months();
    let mut columns: BTreeMap<Month, Vec<Sentiment>> = months.iter().map(|m| (*m, Vec::new())).collect();
    for r in corpus.records() {
        // label presence checked above
        let label = r.label.expect("labelled");
        columns
            .get_mut(&r.month())
            .expect("corpus records lie inside the period")
            .push(label);
    }
    let n_rows = columns.values().map(Vec::len).max().unwrap_or(0);
    let rows = (0..n_rows)
        .map(|i| months.iter().map(|m| columns[m].get(i).copied()).collect())
        .collect();
    ResponseMatrix::new(months.iter().map(Month::to_string).collect(), rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonthSummary {
    pub month: Month,
    pub count: usize,
    pub labeled: usize,
    pub positives: usize,
    /// `None` for months without labelled records.
    pub positive_rate: Option<f64>,
}

/// Per-month record counts and positive rates over the corpus period.
pub fn monthly_summary(corpus: &Corpus) -> Vec<MonthSummary> {
    let Some(period) = corpus.period() else {
        return Vec::new();
    };
    period
        .months()
        .into_iter()
        .map(|m| {
            let in_month: Vec<_> = corpus.records().iter().filter(|r| r.month() == m).collect();
            let labeled = in_month.iter().filter(|r| r.label.is_some()).count();
            let positives = in_month.iter().filter(|r| r.label == Some(Sentiment::Positive)).count();
            MonthSummary {
                month: m,
                count: in_month.len(),
                labeled,
                positives,
                positive_rate: (labeled > 0).then(|| positives as f64 / labeled as f64),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{NewsRecord, Period};

    fn rec(id: &str, date: &str, label: Option<u8>) -> NewsRecord {
        NewsRecord {
            id: id.into(),
            date: date.parse().unwrap(),
            text: String::new(),
            label: label.and_then(Sentiment::from_bit),
            dimension: None,
        }
    }

    #[test]
    fn jan_feb_example() {
        let c = Corpus::new(
            vec![
                rec("a", "2022-01-01", Some(1)),
                rec("b", "2022-02-01", Some(0)),
                rec("c", "2022-01-02", Some(0)),
                rec("d", "2022-02-03", Some(0)),
                rec("e", "2022-01-09", Some(1)),
            ],
            None,
        )
        .unwrap();
        let m = build_response_matrix(&c).unwrap();
        let expect = ResponseMatrix::from_bits(
            vec!["2022-01".into(), "2022-02".into()],
            &[vec![Some(1), Some(0)], vec![Some(0), Some(0)], vec![Some(1), None]],
        )
        .unwrap();
        assert_eq!(m, expect);
        assert_eq!(m.column_counts(), [3, 2]);
    }

    #[test]
    fn single_cell() {
        let c = Corpus::new(vec![rec("a", "2023-05-01", Some(1))], None).unwrap();
        let m = build_response_matrix(&c).unwrap();
        assert_eq!((m.n_rows(), m.n_items()), (1, 1));
        assert_eq!(m.get(0, 0), Some(Sentiment::Positive));
    }

    #[test]
    fn empty_months_are_kept() {
        let p: Period = "2022".parse().unwrap();
        let c = Corpus::new(vec![rec("a", "2022-03-01", Some(1))], Some(p)).unwrap();
        let m = build_response_matrix(&c).unwrap();
        assert_eq!(m.n_items(), 12);
        assert_eq!(m.column_counts().iter().sum::<usize>(), 1);
        assert_eq!(m.column_counts()[2], 1);
    }

    #[test]
    fn errors() {
        let c = Corpus::new(
            vec![rec("x1", "2022-01-01", None), rec("x2", "2022-01-01", Some(1))],
            None,
        )
        .unwrap();
        let err = build_response_matrix(&c).unwrap_err().to_string();
        assert!(err.contains("x1") && !err.contains("x2"));
        let empty = Corpus::new(vec![], None).unwrap();
        assert!(matches!(build_response_matrix(&empty), Err(Error::Validation(m)) if m.contains("empty period")));
    }

    #[test]
    fn csv_roundtrip_and_bad_cells() {
        let m = ResponseMatrix::from_bits(
            vec!["2022-01".into(), "2022-02".into()],
            &[vec![Some(1), None], vec![Some(0), Some(1)]],
        )
        .unwrap();
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "row_id,2022-01,2022-02\n1,1,\n2,0,1\n"
        );
        assert_eq!(ResponseMatrix::read_csv(buf.as_slice()).unwrap(), m);
        assert!(ResponseMatrix::read_csv("row_id,a\n1,2\n".as_bytes()).is_err());
        assert!(ResponseMatrix::read_csv("id,a\n1,1\n".as_bytes()).is_err());
    }

    #[test]
    fn summary_counts() {
        let c = Corpus::new(
            vec![
                rec("a", "2022-01-01", Some(1)),
                rec("b", "2022-01-05", Some(0)),
                rec("c", "2022-03-01", Some(1)),
            ],
            None,
        )
        .unwrap();
        let s = monthly_summary(&c);
        assert_eq!(s.len(), 3);
        assert_eq!((s[0].count, s[0].positives, s[0].positive_rate), (2, 1, Some(0.5)));
        assert_eq!((s[1].count, s[1].positive_rate), (0, None));
    }
}
