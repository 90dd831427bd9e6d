//! Run settings: built-in defaults, then an optional `key = value` file, then
//! command-line flags.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cosmoqsim::cosmology::CosmologyParams;
use cosmoqsim::mitigation::{Extrapolator, NoiseModel, ZneConfig, DEFAULT_EPS1, DEFAULT_EPS2};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: expected `key = value`")]
    Syntax { path: PathBuf, line: usize },
    #[error("unknown config key {0:?}")]
    UnknownKey(String),
    #[error("bad value {value:?} for {key}")]
    BadValue { key: String, value: String },
    #[error("invalid settings: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub a: f64,
    pub b: f64,
    pub mass: f64,
    pub momentum: f64,
    pub time: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    pub eps1: f64,
    pub eps2: f64,
    pub zne_scales: Vec<u32>,
    pub zne_method: Extrapolator,
    pub shots: Option<usize>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub rho: f64,
    pub rhos: Vec<f64>,
    pub eta_min: f64,
    pub eta_max: f64,
    pub eta_points: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            a: 1.5,
            b: 0.5,
            mass: 1.0,
            momentum: 1.0,
            time: 1.0,
            x_min: -2.0,
            x_max: 2.0,
            points: 41,
            eps1: DEFAULT_EPS1,
            eps2: DEFAULT_EPS2,
            zne_scales: vec![1, 3, 5],
            zne_method: Extrapolator::RichardsonQuadratic,
            shots: None,
            seed: 0,
            out: None,
            rho: 1.0,
            rhos: vec![0.5, 1.0, 2.0],
            eta_min: -10.0,
            eta_max: 10.0,
            eta_points: 201,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
    })
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, ConfigError> {
    value
        .split(',')
        .map(|v| parse(key, v.trim()))
        .collect()
}

impl Settings {
    /// Sets one field from its config-file spelling (the flag name without
    /// leading dashes).
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        match key.trim() {
            "A" => self.a = parse(key, v)?,
            "B" => self.b = parse(key, v)?,
            "mass" => self.mass = parse(key, v)?,
            "momentum" => self.momentum = parse(key, v)?,
            "time" => self.time = parse(key, v)?,
            "x-min" => self.x_min = parse(key, v)?,
            "x-max" => self.x_max = parse(key, v)?,
            "points" => self.points = parse(key, v)?,
            "eps1" => self.eps1 = parse(key, v)?,
            "eps2" => self.eps2 = parse(key, v)?,
            "zne-scales" => self.zne_scales = parse_list(key, v)?,
            "zne-method" => self.zne_method = parse(key, v)?,
            "shots" => self.shots = Some(parse(key, v)?),
            "seed" => self.seed = parse(key, v)?,
            "out" => self.out = Some(PathBuf::from(v)),
            "rho" => self.rho = parse(key, v)?,
            "rhos" => self.rhos = parse_list(key, v)?,
            "eta-min" => self.eta_min = parse(key, v)?,
            "eta-max" => self.eta_max = parse(key, v)?,
            "eta-points" => self.eta_points = parse(key, v)?,
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Applies a config file; blank lines and `#` comments are skipped.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                path: path.to_path_buf(),
                line: i + 1,
            })?;
            self.set(key, value)?;
        }
        Ok(())
    }

    /// Cosmology parameters at expansion rate `rho`, validated.
    pub fn params(&self, rho: f64) -> Result<CosmologyParams, ConfigError> {
        CosmologyParams::new(self.a, self.b, rho, self.mass, self.momentum, self.time)
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn noise(&self) -> Result<NoiseModel, ConfigError> {
        NoiseModel::new(self.eps1, self.eps2).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn zne(&self) -> Result<ZneConfig, ConfigError> {
        ZneConfig::new(self.zne_scales.clone(), self.zne_method)
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    /// Log10 grid of expansion rates, endpoints included.
    pub fn x_grid(&self) -> Result<Vec<f64>, ConfigError> {
        grid(self.x_min, self.x_max, self.points, "x")
    }

    pub fn eta_grid(&self) -> Result<Vec<f64>, ConfigError> {
        grid(self.eta_min, self.eta_max, self.eta_points, "eta")
    }
}

fn grid(lo: f64, hi: f64, n: usize, name: &str) -> Result<Vec<f64>, ConfigError> {
    if n == 0 || !lo.is_finite() || !hi.is_finite() || lo > hi || (n == 1 && lo != hi) {
        return Err(ConfigError::Invalid(format!(
            "{name} grid [{lo}, {hi}] with {n} points"
        )));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let span = hi - lo;
    Ok((0..n)
        .map(|k| lo + (k as f64 * span) / (n - 1) as f64)
        .collect())
}
