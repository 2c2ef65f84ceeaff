use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::Deserialize;

use super::{Corpus, Dimension, NewsRecord, Sentiment};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Csv,
    Jsonl,
}

impl CorpusFormat {
    /// Guesses the format from a file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("jsonl") || ext.eq_ignore_ascii_case("ndjson") => CorpusFormat::Jsonl,
            _ => CorpusFormat::Csv,
        }
    }
}

impl FromStr for CorpusFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(CorpusFormat::Csv),
            "jsonl" | "ndjson" => Ok(CorpusFormat::Jsonl),
            other => Err(Error::Validation(format!("unknown corpus format `{other}`"))),
        }
    }
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    id: String,
    date: String,
    #[serde(default)]
    text: Option<String>,
    #[serde(default)]
    label: Option<String>,
    #[serde(default)]
    dimension: Option<String>,
}

#[derive(Debug, Deserialize)]
struct JsonRow {
    id: serde_json::Value,
    date: String,
    #[serde(default)]
    text: Option<String>,
    #[serde(default)]
    label: Option<serde_json::Value>,
    #[serde(default)]
    dimension: Option<String>,
}

/// Reads a corpus file. Records keep file order and the period is inferred
/// from the earliest and latest month.
pub fn parse_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_corpus(BufReader::new(file), format)
}

pub fn read_corpus<R: Read>(reader: R, format: CorpusFormat) -> Result<Corpus> {
    let records = match format {
        CorpusFormat::Csv => read_csv(reader)?,
        CorpusFormat::Jsonl => read_jsonl(reader)?,
    };
    Corpus::new(records, None)
}

fn read_csv<R: Read>(reader: R) -> Result<Vec<NewsRecord>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let has = |name: &str| headers.iter().any(|h| h == name);
    for required in ["id", "date"] {
        if !has(required) {
            return Err(Error::Validation(format!("CSV header lacks `{required}` column")));
        }
    }
    if !has("label") && !has("text") {
        return Err(Error::Validation("CSV header needs a `label` or `text` column".into()));
    }

    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let line = row.position().map(|p| p.line() as usize).unwrap_or(i + 2);
        let raw: CsvRow = row.deserialize(Some(&headers)).map_err(|e| Error::Parse {
            row: line,
            message: e.to_string(),
        })?;
        let label = match raw.label.as_deref().map(str::trim) {
            None | Some("") => None,
            Some(s) => Some(parse_label(s, line)?),
        };
        out.push(make_record(line, raw.id, &raw.date, raw.text, label, raw.dimension)?);
    }
    Ok(out)
}

fn read_jsonl<R: Read>(reader: R) -> Result<Vec<NewsRecord>> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::Parse {
            row: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: JsonRow = serde_json::from_str(&line).map_err(|e| Error::Parse {
            row: line_no,
            message: e.to_string(),
        })?;
        let id = match raw.id {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) => n.to_string(),
            other => {
                return Err(Error::Parse {
                    row: line_no,
                    message: format!("id must be a string or number, got {other}"),
                })
            }
        };
        let label = match raw.label {
            None | Some(serde_json::Value::Null) => None,
            Some(serde_json::Value::Number(n)) => Some(parse_label(&n.to_string(), line_no)?),
            Some(serde_json::Value::String(s)) if s.trim().is_empty() => None,
            Some(serde_json::Value::String(s)) => Some(parse_label(s.trim(), line_no)?),
            Some(other) => Some(parse_label(&other.to_string(), line_no)?),
        };
        out.push(make_record(line_no, id, &raw.date, raw.text, label, raw.dimension)?);
    }
    Ok(out)
}

fn parse_label(s: &str, row: usize) -> Result<Sentiment> {
    match s {
        "0" => Ok(Sentiment::Negative),
        "1" => Ok(Sentiment::Positive),
        other => Err(Error::Validation(format!("row {row}: label `{other}` is not 0 or 1"))),
    }
}

fn make_record(
    row: usize,
    id: String,
    date: &str,
    text: Option<String>,
    label: Option<Sentiment>,
    dimension: Option<String>,
) -> Result<NewsRecord> {
    if id.trim().is_empty() {
        return Err(Error::Validation(format!("row {row}: empty id")));
    }
    let date = NaiveDate::parse_from_str(date.trim(), "%Y-%m-%d").map_err(|e| Error::Parse {
        row,
        message: format!("malformed date `{date}`: {e}"),
    })?;
    let dimension = match dimension.as_deref().map(str::trim) {
        None | Some("") => None,
        Some(s) => Some(
            s.parse::<Dimension>()
                .map_err(|e| Error::Validation(format!("row {row}: {e}")))?,
        ),
    };
    Ok(NewsRecord {
        id,
        date,
        text: text.unwrap_or_default(),
        label,
        dimension,
    })
}

/// Writes records in the canonical `id,date,text,label,dimension` layout.
pub fn write_corpus_csv<W: Write>(corpus: &Corpus, writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["id", "date", "text", "label", "dimension"])?;
    for r in corpus.records() {
        let date = r.date.format("%Y-%m-%d").to_string();
        let label = r.label.map(|l| l.bit().to_string()).unwrap_or_default();
        let dim = r.dimension.map(Dimension::as_str).unwrap_or("");
        wtr.write_record([r.id.as_str(), &date, &r.text, &label, dim])?;
    }
    wtr.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}
