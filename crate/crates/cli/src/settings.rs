//! Flat key=value configuration files. Precedence is command-line flag over
//! file entry over built-in default; keys mirror the long flag names.

use crate::CliError;
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

/// Parsed configuration file, or the empty overlay when none was given.
pub struct Overlay {
    entries: BTreeMap<String, String>,
}

impl Overlay {
    pub fn empty() -> Self {
        Overlay {
            entries: BTreeMap::new(),
        }
    }

    /// Loads `path`, accepting only `allowed` keys. Lines hold `key=value`;
    /// blank lines and `#` comments are skipped.
    pub fn load(path: &Path, allowed: &[&str]) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        let mut entries = BTreeMap::new();
        for (number, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "{} line {}: expected key=value",
                    path.display(),
                    number + 1
                )));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if !allowed.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "{} line {}: unknown key {key}",
                    path.display(),
                    number + 1
                )));
            }
            if entries.insert(key.clone(), value).is_some() {
                return Err(CliError::Usage(format!(
                    "{} line {}: duplicate key {key}",
                    path.display(),
                    number + 1
                )));
            }
        }
        Ok(Overlay { entries })
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Typed lookup; a present but unparsable value is a usage error.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|_| {
                CliError::Usage(format!("configuration key {key}: cannot parse {v:?}"))
            }),
        }
    }
}

/// Flag value wins, then the file entry, then the default.
pub fn pick<T: FromStr>(
    flag: Option<T>,
    overlay: &Overlay,
    key: &str,
    default: T,
) -> Result<T, CliError> {
    match flag {
        Some(v) => Ok(v),
        None => Ok(overlay.get::<T>(key)?.unwrap_or(default)),
    }
}

/// Like `pick` without a default.
pub fn pick_optional<T: FromStr>(
    flag: Option<T>,
    overlay: &Overlay,
    key: &str,
) -> Result<Option<T>, CliError> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => overlay.get::<T>(key),
    }
}
