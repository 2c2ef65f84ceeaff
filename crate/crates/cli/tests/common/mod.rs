#![allow(dead_code)]

pub mod fixtures;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn ok(self) -> Self {
        assert_eq!(self.code, 0, "command failed: {}", self.stderr);
        self
    }
}

/// Runs the `esg-irt` binary in `cwd`.
pub fn esg_irt<S: AsRef<std::ffi::OsStr>>(cwd: &Path, args: &[S]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_esg-irt"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn write(path: &Path, text: &str) {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).unwrap();
    }
    fs::write(path, text).unwrap();
}

pub fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Every file under `dir`, keyed by relative path.
pub fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.insert(path.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&path).unwrap());
            }
        }
    }
    out
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Compares `actual` with the stored golden file. With `UPDATE_GOLDEN=1`
/// the golden file is rewritten instead.
pub fn check_golden(name: &str, actual: &[u8]) -> Result<(), String> {
    let path = golden_dir().join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        let first_diff = expected
            .iter()
            .zip(actual)
            .position(|(a, b)| a != b)
            .unwrap_or(expected.len().min(actual.len()));
        Err(format!(
            "{name} differs from golden file at byte {first_diff} (golden {} bytes, actual {} bytes)",
            expected.len(),
            actual.len()
        ))
    }
}

/// Files produced by the golden pipeline, in the order they are checked.
pub const GOLDEN_OUTPUTS: [&str; 8] = [
    "corpus.csv",
    "matrix.csv",
    "fit.json",
    "curves.csv",
    "icc_2022.svg",
    "iic_2022.svg",
    "metric_log.csv",
    "ranked.csv",
];

/// Runs the fixed fixture pipeline in `dir` and returns the golden outputs.
pub fn golden_pipeline(dir: &Path) -> Vec<(&'static str, Vec<u8>)> {
    let sim = fixtures::simulate_corpus(2022, 24, |j| 10 + j % 4, 7);
    write(&dir.join("corpus.csv"), &sim.csv);
    write(
        &dir.join("metric_log.csv"),
        &fixtures::metric_log_csv(&fixtures::small_grid(), 11, None),
    );
    esg_irt(dir, &["ingest", "-i", "corpus.csv", "-o", "out"]).ok();
    esg_irt(dir, &["fit", "-o", "out"]).ok();
    esg_irt(dir, &["curves", "-o", "out", "--steps", "41"]).ok();
    esg_irt(dir, &["topsis", "-r", "metric_log.csv", "-o", "out"]).ok();
    GOLDEN_OUTPUTS
        .iter()
        .map(|&name| {
            let path = if name == "corpus.csv" || name == "metric_log.csv" {
                dir.join(name)
            } else {
                dir.join("out").join(name)
            };
            (
                name,
                fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display())),
            )
        })
        .collect()
}
