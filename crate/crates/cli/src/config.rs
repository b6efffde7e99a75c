//! Run configuration: a flat `key = value` file (TOML syntax), overridden by
//! the `SU2TORIC_OUTPUT_DIR` environment variable and `--set key=value` flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use su2_toric::repkernel::{AxisAngle, HalfInt};
use thiserror::Error;

/// Environment variable that overrides `outputDir`.
pub const OUTPUT_DIR_ENV: &str = "SU2TORIC_OUTPUT_DIR";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config key `{key}`: {message}")]
    Key { key: String, message: String },
    #[error("config: {0}")]
    Syntax(String),
}

impl ConfigError {
    fn key(key: &str, message: impl Into<String>) -> Self {
        ConfigError::Key { key: key.to_string(), message: message.into() }
    }

    /// The offending key, when the error can be attributed to one.
    pub fn offending_key(&self) -> Option<&str> {
        match self {
            ConfigError::Key { key, .. } => Some(key),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Linear lattice size.
    #[serde(rename = "L")]
    pub l: usize,
    /// Twice the link-spin cutoff.
    #[serde(rename = "jmaxTwice")]
    pub jmax_twice: i32,
    /// Gauge group rank; only `N = 2` has numerics.
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub alpha: f64,
    /// Vortex angle.
    pub omega: f64,
    /// Vortex axis (normalised on use).
    pub axis: [f64; 3],
    /// Topological sector `(p, q)`.
    pub sector: [i64; 2],
    /// Vortex tier: 1 runs the single-rung suite, 2 adds the ladder suite.
    pub tier: u8,
    pub tolerances: BTreeMap<String, f64>,
    pub seed: u64,
    #[serde(rename = "outputDir")]
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            l: 2,
            jmax_twice: 2,
            n: 2,
            a: 1.0,
            b: 1.0,
            c: 1.0,
            alpha: 1.0,
            omega: std::f64::consts::FRAC_PI_2,
            axis: [0.3, -0.5, 0.8],
            sector: [0, 0],
            tier: 2,
            tolerances: default_tolerances(),
            seed: 20_240_601,
            output_dir: PathBuf::from("reports"),
        }
    }
}

/// Named tolerances and their defaults.
pub fn default_tolerances() -> BTreeMap<String, f64> {
    [
        // single-link matrix identities
        ("algebra", 1e-12),
        // many-body identities on vectors and local operators
        ("exact", 1e-10),
        // extracted rotation angles
        ("angle", 1e-8),
        // matrix-exponential truncation
        ("expm", 1e-12),
        // slack when comparing convergence distances
        ("convergence", 1e-12),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

impl RunConfig {
    /// Parses a config file body; missing keys keep their defaults.
    pub fn from_str_with_defaults(text: &str) -> Result<Self, ConfigError> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Syntax(e.message().to_string()))?;
        let mut cfg = Self::default();
        for (key, value) in table {
            cfg.set_value(&key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Self::from_str_with_defaults(&text)
    }

    /// Applies the output-directory environment override, if set.
    pub fn apply_env(&mut self) {
        if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV) {
            if !dir.is_empty() {
                self.output_dir = PathBuf::from(dir);
            }
        }
    }

    /// Applies one `key=value` override; the value uses the file syntax.
    pub fn set(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (key, raw) = assignment
            .split_once('=')
            .ok_or_else(|| ConfigError::Syntax(format!("override `{assignment}` is not of the form key=value")))?;
        let key = key.trim();
        let raw = raw.trim();
        let value = parse_value(raw).ok_or_else(|| ConfigError::key(key, format!("cannot parse value `{raw}`")))?;
        self.set_value(key, value)?;
        self.validate()
    }

    fn set_value(&mut self, key: &str, value: toml::Value) -> Result<(), ConfigError> {
        if let Some(name) = key.strip_prefix("tolerances.") {
            let v = as_f64(&value).ok_or_else(|| ConfigError::key(key, "expected a number"))?;
            self.tolerances.insert(name.to_string(), v);
            return Ok(());
        }
        if key == "tolerances" {
            let table = value.as_table().ok_or_else(|| ConfigError::key(key, "expected a table of name = number"))?;
            for (name, v) in table {
                let v = as_f64(v).ok_or_else(|| ConfigError::key(&format!("tolerances.{name}"), "expected a number"))?;
                self.tolerances.insert(name.clone(), v);
            }
            return Ok(());
        }
        let mut table = match toml::Value::try_from(&*self) {
            Ok(toml::Value::Table(t)) => t,
            _ => unreachable!("config serialises to a table"),
        };
        if !table.contains_key(key) {
            return Err(ConfigError::key(key, "unknown key"));
        }
        let value = coerce(&table[key], value);
        table.insert(key.to_string(), value);
        *self = toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| ConfigError::key(key, e.message().to_string()))?;
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.l < 2 {
            return Err(ConfigError::key("L", "lattice size must be at least 2"));
        }
        if !(1..=3).contains(&self.jmax_twice) {
            return Err(ConfigError::key("jmaxTwice", "must be 1, 2 or 3"));
        }
        if self.n != 2 {
            return Err(ConfigError::key("N", "numerics are implemented for N = 2 only"));
        }
        for (key, v) in [("A", self.a), ("B", self.b), ("C", self.c), ("alpha", self.alpha)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::key(key, "must be a positive number"));
            }
        }
        if !self.omega.is_finite() {
            return Err(ConfigError::key("omega", "must be finite"));
        }
        if AxisAngle::from_direction(self.axis, self.omega).is_err() {
            return Err(ConfigError::key("axis", "must be a non-zero finite 3-vector"));
        }
        if !(1..=2).contains(&self.tier) {
            return Err(ConfigError::key("tier", "must be 1 or 2"));
        }
        for (name, v) in &self.tolerances {
            if !(*v > 0.0 && v.is_finite()) {
                return Err(ConfigError::key(&format!("tolerances.{name}"), "tolerances must be positive"));
            }
        }
        Ok(())
    }

    pub fn jmax(&self) -> HalfInt {
        HalfInt::from_twice(self.jmax_twice)
    }

    /// Cutoffs `½, 1, …, jmax` used for convergence comparisons.
    pub fn ladder(&self) -> Vec<HalfInt> {
        (1..=self.jmax_twice).map(HalfInt::from_twice).collect()
    }

    pub fn axis_angle(&self) -> AxisAngle {
        self.axis_angle_with(self.omega)
    }

    pub fn axis_angle_with(&self, omega: f64) -> AxisAngle {
        AxisAngle::from_direction(self.axis, omega).expect("axis validated")
    }

    /// A named tolerance (falls back to the built-in default).
    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().unwrap_or_else(|| default_tolerances()[name])
    }

    /// The config echoed into reports.
    pub fn echo(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serialises")
    }
}

fn parse_value(raw: &str) -> Option<toml::Value> {
    let doc = format!("v = {raw}");
    match doc.parse::<toml::Table>() {
        Ok(mut t) => t.remove("v"),
        // bare words such as paths
        Err(_) => Some(toml::Value::String(raw.to_string())),
    }
}

fn as_f64(v: &toml::Value) -> Option<f64> {
    match v {
        toml::Value::Float(f) => Some(*f),
        toml::Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

/// Lets integers stand in for floats (`omega = 3`) and floats for arrays of
/// floats element-wise.
fn coerce(template: &toml::Value, value: toml::Value) -> toml::Value {
    match (template, value) {
        (toml::Value::Float(_), toml::Value::Integer(i)) => toml::Value::Float(i as f64),
        (toml::Value::Array(t), toml::Value::Array(vs)) if t.first().is_some_and(|x| x.is_float()) => {
            toml::Value::Array(vs.into_iter().map(|v| coerce(&t[0], v)).collect())
        }
        (_, v) => v,
    }
}
