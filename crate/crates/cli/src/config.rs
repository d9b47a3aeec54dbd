//! Settings resolution: command-line flags, then the config file, then
//! built-in defaults.

use std::path::Path;
use std::str::FromStr;

use anyhow::{Context, Result};

use crate::UsageError;

#[derive(Debug, Default)]
pub struct Settings {
    file: toml::Table,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Settings::default());
        };
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file = text
            .parse::<toml::Table>()
            .map_err(|e| UsageError(format!("config file {}: {e}", path.display())))?;
        Ok(Settings { file })
    }

    pub fn from_table(file: toml::Table) -> Self {
        Settings { file }
    }

    fn lookup(&self, key: &str) -> Option<&toml::Value> {
        self.file.get(key)
    }

    fn file_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.lookup(key) {
            None => Ok(None),
            Some(toml::Value::Float(v)) => Ok(Some(*v)),
            Some(toml::Value::Integer(v)) => Ok(Some(*v as f64)),
            Some(other) => Err(UsageError(format!(
                "config key `{key}`: expected a number, got {other}"
            ))
            .into()),
        }
    }

    pub fn f64(&self, key: &str, flag: Option<f64>, default: f64) -> Result<f64> {
        Ok(match flag {
            Some(v) => v,
            None => self.file_f64(key)?.unwrap_or(default),
        })
    }

    pub fn opt_f64(&self, key: &str, flag: Option<f64>) -> Result<Option<f64>> {
        Ok(match flag {
            Some(v) => Some(v),
            None => self.file_f64(key)?,
        })
    }

    pub fn usize(&self, key: &str, flag: Option<usize>, default: usize) -> Result<usize> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.lookup(key) {
            None => Ok(default),
            Some(toml::Value::Integer(v)) if *v >= 0 => Ok(*v as usize),
            Some(other) => Err(UsageError(format!(
                "config key `{key}`: expected a non-negative integer, got {other}"
            ))
            .into()),
        }
    }

    pub fn bool(&self, key: &str, flag: bool) -> Result<bool> {
        if flag {
            return Ok(true);
        }
        match self.lookup(key) {
            None => Ok(false),
            Some(toml::Value::Boolean(v)) => Ok(*v),
            Some(other) => Err(UsageError(format!(
                "config key `{key}`: expected a boolean, got {other}"
            ))
            .into()),
        }
    }

    pub fn string(&self, key: &str, flag: Option<&str>) -> Result<Option<String>> {
        if let Some(v) = flag {
            return Ok(Some(v.to_string()));
        }
        match self.lookup(key) {
            None => Ok(None),
            Some(toml::Value::String(v)) => Ok(Some(v.clone())),
            Some(other) => Err(UsageError(format!(
                "config key `{key}`: expected a string, got {other}"
            ))
            .into()),
        }
    }

    /// A string setting parsed with `FromStr`.
    pub fn parsed<T>(&self, key: &str, flag: Option<&str>, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        match self.string(key, flag)? {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|e| UsageError(format!("`{key}`: {e}")).into()),
        }
    }
}
