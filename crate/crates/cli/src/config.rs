//! Optional TOML run configuration. Every key mirrors a command-line flag;
//! flags win over the file. Relative paths are resolved against the
//! directory holding the config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use esg_irt::topsis::Direction;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub corpus: CorpusConfig,
    #[serde(default)]
    pub split: SplitConfig,
    #[serde(default)]
    pub rasch: RaschConfig,
    #[serde(default)]
    pub curves: CurvesConfig,
    #[serde(default)]
    pub topsis: WeightsConfig,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusConfig {
    pub input: Option<PathBuf>,
    pub format: Option<String>,
    pub period: Option<String>,
    pub definitions: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitConfig {
    pub fraction: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RaschConfig {
    pub matrix: Option<PathBuf>,
    pub period: Option<String>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub bias_correction: Option<bool>,
    pub allow_nonconverged: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvesConfig {
    pub fit: Option<PathBuf>,
    pub theta_min: Option<f64>,
    pub theta_max: Option<f64>,
    pub steps: Option<usize>,
}

/// TOPSIS weights and directions keyed by metric name. Also the layout of
/// a standalone `--weights` file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsConfig {
    pub records: Option<PathBuf>,
    #[serde(default)]
    pub weights: BTreeMap<String, f64>,
    #[serde(default)]
    pub directions: BTreeMap<String, Direction>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg: RunConfig = toml::from_str(&text).map_err(|e| CliError::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        if let Some(base) = path.parent() {
            cfg.resolve_paths(base);
        }
        Ok(cfg)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut Option<PathBuf>| {
            if let Some(path) = p.as_mut() {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        };
        fix(&mut self.out_dir);
        fix(&mut self.corpus.input);
        fix(&mut self.corpus.definitions);
        fix(&mut self.rasch.matrix);
        fix(&mut self.curves.fit);
        fix(&mut self.topsis.records);
    }
}

pub fn load_weights(path: &Path) -> CliResult<WeightsConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    toml::from_str(&text).map_err(|e| CliError::Config {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}
