//! Optional TOML settings file. Every key is optional; command-line flags
//! win over anything set here.
//!
//! ```toml
//! beta = "0.1:7:70"          # or a list: [1.0, 1.5, 2.0]
//! eps = [0.1, 0.5, 0.9]
//! measures = "qd,gqd,min"
//! method = "both"
//! out = "sweep.csv"
//! grid_theta = 64
//! grid_phi = 128
//! refine_iters = 200
//! tol = 1e-9
//! seed = 1
//! workers = 0
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

/// An axis given either in the command-line syntax or as a TOML array.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum AxisSetting {
    Text(String),
    Number(f64),
    List(Vec<f64>),
}

impl AxisSetting {
    /// Canonical text form, parsed by the same code as the flag.
    pub fn to_arg(&self) -> String {
        match self {
            AxisSetting::Text(s) => s.clone(),
            AxisSetting::Number(v) => v.to_string(),
            AxisSetting::List(vs) => vs.iter().map(f64::to_string).collect::<Vec<_>>().join(","),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub beta: Option<AxisSetting>,
    pub eps: Option<AxisSetting>,
    pub measures: Option<String>,
    pub method: Option<String>,
    pub out: Option<PathBuf>,
    pub grid_theta: Option<usize>,
    pub grid_phi: Option<usize>,
    pub refine_iters: Option<usize>,
    pub tol: Option<f64>,
    pub degeneracy_tol: Option<f64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
}

#[derive(Debug)]
pub enum ConfigError {
    Io(PathBuf, std::io::Error),
    Parse(PathBuf, toml::de::Error),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Io(p, e) => write!(f, "cannot read config {}: {e}", p.display()),
            ConfigError::Parse(p, e) => write!(f, "bad config {}: {e}", p.display()),
        }
    }
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|e| ConfigError::Io(path.to_owned(), e))?;
        Self::parse(&text).map_err(|e| ConfigError::Parse(path.to_owned(), e))
    }

    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}
