//! Flat `key = value` configuration merged with command-line overrides.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use nalgebra::Vector3;

use crate::CliError;

/// Merged settings; keys use the long flag spelling without dashes prefix.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// Read `path`, skipping blank lines and `#` comments.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("config line {}: expected key = value", i + 1)))?;
            let key = key.trim().replace('_', "-");
            if key.is_empty() {
                return Err(CliError::Config(format!("config line {}: empty key", i + 1)));
            }
            if values.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(CliError::Config(format!("config line {}: duplicate key {key}", i + 1)));
            }
        }
        Ok(Settings { values })
    }

    pub fn set(&mut self, key: &str, value: Option<&String>) {
        if let Some(v) = value {
            self.values.insert(key.to_string(), v.clone());
        }
    }

    pub fn set_flag(&mut self, key: &str, on: bool) {
        if on {
            self.values.insert(key.to_string(), "true".into());
        }
    }

    /// Reject keys the command does not understand.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), CliError> {
        match self.values.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(CliError::Config(format!("unknown setting `{k}`"))),
            None => Ok(()),
        }
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    pub fn str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.str(key) {
            None | Some("false") => Ok(false),
            Some("true") => Ok(true),
            Some(v) => Err(CliError::Config(format!("{key} must be true or false, got `{v}`"))),
        }
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.str(key).map(|v| number(key, v)).transpose()
    }

    pub fn positive(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.f64(key)? {
            Some(v) if !(v > 0.0 && v.is_finite()) => Err(CliError::Config(format!("{key} must be positive, got {v}"))),
            other => Ok(other),
        }
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        self.str(key)
            .map(|v| v.parse().map_err(|_| CliError::Config(format!("{key} must be a nonnegative integer, got `{v}`"))))
            .transpose()
    }

    /// Grid given as `a,b,c` or `start:stop:count` (inclusive, count ≥ 1).
    pub fn grid(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        let Some(text) = self.str(key) else { return Ok(None) };
        let grid = if text.contains(':') {
            let parts: Vec<&str> = text.split(':').collect();
            if parts.len() != 3 {
                return Err(CliError::Config(format!("{key}: range must be start:stop:count, got `{text}`")));
            }
            let (a, b) = (number(key, parts[0])?, number(key, parts[1])?);
            let n: usize = parts[2]
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("{key}: count must be an integer, got `{}`", parts[2])))?;
            match n {
                0 => Vec::new(),
                1 => vec![a],
                _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
            }
        } else {
            text.split(',').map(|v| number(key, v)).collect::<Result<_, _>>()?
        };
        if grid.is_empty() {
            return Err(CliError::Config(format!("{key}: grid is empty")));
        }
        Ok(Some(grid))
    }

    pub fn vector(&self, key: &str) -> Result<Option<Vector3<f64>>, CliError> {
        let Some(text) = self.str(key) else { return Ok(None) };
        let v: Vec<f64> = text.split(',').map(|x| number(key, x)).collect::<Result<_, _>>()?;
        if v.len() != 3 {
            return Err(CliError::Config(format!("{key} needs three components, got `{text}`")));
        }
        Ok(Some(Vector3::new(v[0], v[1], v[2])))
    }

    /// Vector normalized to unit length.
    pub fn direction(&self, key: &str) -> Result<Option<Vector3<f64>>, CliError> {
        match self.vector(key)? {
            Some(v) if !(v.norm() > 0.0 && v.norm().is_finite()) => {
                Err(CliError::Config(format!("{key} must be a nonzero vector")))
            }
            Some(v) => Ok(Some(v.normalize())),
            None => Ok(None),
        }
    }
}

/// Number with an optional `pi` factor: `0.5pi`, `pi`, `-2pi`.
fn number(key: &str, text: &str) -> Result<f64, CliError> {
    let t = text.trim();
    let bad = || CliError::Config(format!("{key}: cannot parse `{t}` as a number"));
    let value = if let Some(head) = t.strip_suffix("pi") {
        let head = head.trim().trim_end_matches('*');
        let factor = match head {
            "" | "+" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().map_err(|_| bad())?,
        };
        factor * PI
    } else {
        t.parse::<f64>().map_err(|_| bad())?
    };
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(value)
}
