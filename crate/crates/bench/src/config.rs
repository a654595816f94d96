//! `key = value` campaign files. Keys mirror the `run` flags; either `-` or `_`
//! may separate words (`d-tol`, `d_tol`). `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};

pub const KEYS: &[&str] = &[
    "problem",
    "algos",
    "trials",
    "seed",
    "out",
    "jobs",
    "d-tol",
    "max-iters",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!("line {}: expected key = value", i + 1);
            };
            let key = k.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                bail!(
                    "line {}: unknown key {:?}; known: {}",
                    i + 1,
                    k.trim(),
                    KEYS.join(", ")
                );
            }
            if values.insert(key, v.trim().to_string()).is_some() {
                bail!("line {}: {} given twice", i + 1, k.trim());
            }
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Parses a value, naming the key on failure.
    pub fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| anyhow::anyhow!("config key {key}: {e}")),
        }
    }
}
