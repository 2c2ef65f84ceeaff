pub mod classify;
pub mod curves;
pub mod fit;
pub mod grid;
pub mod ingest;
pub mod metrics;
pub mod split;
pub mod topsis;

use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use esg_irt::ingest::{parse_corpus, Corpus, CorpusFormat, EsgDefinitions, LexiconScorer, Period};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::{CorpusInput, OutDir};

pub(crate) fn out_dir(config: &RunConfig, flag: &OutDir) -> PathBuf {
    flag.out_dir
        .clone()
        .or_else(|| config.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Renders into memory, then writes `dir/name`, creating `dir` if needed.
pub(crate) fn write_output<F>(dir: &Path, name: &str, render: F) -> CliResult<PathBuf>
where
    F: FnOnce(&mut Vec<u8>) -> esg_irt::Result<()>,
{
    let mut buf = Vec::new();
    render(&mut buf)?;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, buf).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

pub(crate) fn write_text(dir: &Path, name: &str, text: &str) -> CliResult<PathBuf> {
    write_output(dir, name, |buf| {
        buf.extend_from_slice(text.as_bytes());
        Ok(())
    })
}

pub(crate) fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| CliError::io(path, e))
}

pub(crate) fn read_to_string(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub(crate) fn load_corpus(config: &RunConfig, input: &CorpusInput) -> CliResult<Corpus> {
    let path = input
        .input
        .clone()
        .or_else(|| config.corpus.input.clone())
        .ok_or_else(|| CliError::Usage("no corpus given; pass --input or set [corpus] input".into()))?;
    let format = match input.format.as_ref().or(config.corpus.format.as_ref()) {
        Some(f) => f.parse::<CorpusFormat>()?,
        None => CorpusFormat::from_path(&path),
    };
    Ok(parse_corpus(&path, format)?)
}

pub(crate) fn parse_period(s: &str) -> CliResult<Period> {
    Ok(s.parse::<Period>()?)
}

pub(crate) fn lexicon(config: &RunConfig, flag: Option<&PathBuf>) -> CliResult<LexiconScorer> {
    let defs = match flag.or(config.corpus.definitions.as_ref()) {
        Some(path) => EsgDefinitions::from_json(&read_to_string(path)?)?,
        None => EsgDefinitions::builtin(),
    };
    Ok(LexiconScorer::from_definitions(&defs))
}
