//! Flat `key = value` grid files. Keys are the field names of
//! [`SimulationSetting`]; `gamma`, `pi0`, `mu_min` and `mu_max` accept
//! comma-separated lists, with `mu_min` and `mu_max` paired element by element.
//! Blank lines and `#` comments are ignored; unknown or repeated keys are errors.

use std::collections::HashSet;
use std::str::FromStr;

use crate::error::{config, Error, Result};

use super::{PValueKind, SimulationSetting};

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    /// Values shared by every cell; its grid-axis fields are overwritten.
    pub base: SimulationSetting,
    pub gammas: Vec<usize>,
    pub pi0s: Vec<f64>,
    pub mu_pairs: Vec<(f64, f64)>,
}

impl GridSpec {
    /// Cells ordered by gamma, then effect range, then pi0.
    pub fn settings(&self) -> Vec<SimulationSetting> {
        let mut out = Vec::new();
        for &gamma in &self.gammas {
            for &(mu_min, mu_max) in &self.mu_pairs {
                for &pi0 in &self.pi0s {
                    out.push(SimulationSetting {
                        gamma,
                        pi0,
                        mu_min,
                        mu_max,
                        ..self.base.clone()
                    });
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        for s in self.settings() {
            s.validate()?;
        }
        Ok(())
    }
}

fn parse_one<T: FromStr>(key: &str, raw: &str) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| config(format!("invalid value `{}` for `{key}`", raw.trim())))
}

fn parse_list<T: FromStr>(key: &str, raw: &str) -> Result<Vec<T>> {
    raw.split(',').map(|v| parse_one(key, v)).collect()
}

fn parse_scalar<T: FromStr>(key: &str, raw: &str) -> Result<T> {
    if raw.contains(',') {
        return Err(config(format!("`{key}` takes a single value")));
    }
    parse_one(key, raw)
}

/// Parses a grid file. Missing keys keep their [`SimulationSetting::default`] values.
pub fn parse_grid(text: &str) -> Result<GridSpec> {
    let base = SimulationSetting::default();
    let mut spec = GridSpec {
        gammas: vec![base.gamma],
        pi0s: vec![base.pi0],
        mu_pairs: Vec::new(),
        base,
    };
    let mut mu_min = vec![spec.base.mu_min];
    let mut mu_max = vec![spec.base.mu_max];
    let mut seen = HashSet::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| config(format!("line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim();
        if !seen.insert(key.to_string()) {
            return Err(config(format!("line {}: repeated key `{key}`", lineno + 1)));
        }
        let b = &mut spec.base;
        match key {
            "m" => b.m = parse_scalar(key, value)?,
            "s" => b.s = parse_scalar(key, value)?,
            "gamma" => spec.gammas = parse_list(key, value)?,
            "pi0" => spec.pi0s = parse_list(key, value)?,
            "mu_min" => mu_min = parse_list(key, value)?,
            "mu_max" => mu_max = parse_list(key, value)?,
            "p0" => b.p0 = parse_scalar(key, value)?,
            "p1" => b.p1 = parse_scalar(key, value)?,
            "n" => b.n = parse_scalar(key, value)?,
            "lambda" => b.lambda = parse_scalar(key, value)?,
            "seed" => b.seed = parse_scalar(key, value)?,
            "reps" => b.reps = parse_scalar(key, value)?,
            "model" => b.model = value.parse()?,
            "pvalue_kinds" => {
                b.pvalue_kinds = value
                    .split(',')
                    .map(PValueKind::from_str)
                    .collect::<Result<_>>()?
            }
            other => {
                return Err(Error::Config(format!(
                    "line {}: unknown key `{other}`",
                    lineno + 1
                )))
            }
        }
    }
    if mu_min.len() != mu_max.len() {
        return Err(config(format!(
            "mu_min has {} values but mu_max has {}",
            mu_min.len(),
            mu_max.len()
        )));
    }
    spec.mu_pairs = mu_min.into_iter().zip(mu_max).collect();
    spec.validate()?;
    Ok(spec)
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_grid(s)
    }
}
