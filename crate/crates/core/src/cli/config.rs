//! Plain `key = value` experiment configuration files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::CliError;

/// Parsed configuration. Blank lines and `#` comments are ignored; every key
/// must be consumed, so typos are reported.
#[derive(Debug, Clone, Default)]
pub struct KeyValueConfig {
    path: PathBuf,
    entries: BTreeMap<String, (u64, String)>,
}

impl KeyValueConfig {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i as u64 + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| CliError::Input {
                path: path.into(),
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim().to_string();
            if entries.insert(key.clone(), (line_no, value.trim().to_string())).is_some() {
                return Err(CliError::Input {
                    path: path.into(),
                    line: line_no,
                    message: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(Self { path: path.into(), entries })
    }

    /// Removes and parses `key`.
    pub fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.entries.remove(key) {
            None => Ok(None),
            Some((line, value)) => value.parse().map(Some).map_err(|e| CliError::Input {
                path: self.path.clone(),
                line,
                message: format!("bad value for `{key}`: {e}"),
            }),
        }
    }

    /// Comma-separated list.
    pub fn take_list<T: FromStr>(&mut self, key: &str) -> Result<Option<Vec<T>>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        let Some((line, value)) = self.entries.remove(key) else {
            return Ok(None);
        };
        value
            .split(',')
            .map(|v| v.trim().parse())
            .collect::<Result<Vec<T>, _>>()
            .map(Some)
            .map_err(|e| CliError::Input {
                path: self.path.clone(),
                line,
                message: format!("bad list for `{key}`: {e}"),
            })
    }

    /// A path, resolved relative to the configuration file.
    pub fn take_path(&mut self, key: &str) -> Result<Option<PathBuf>, CliError> {
        Ok(self.take::<PathBuf>(key)?.map(|p| match self.path.parent() {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p,
        }))
    }

    /// Fails if any key was not consumed.
    pub fn finish(self) -> Result<(), CliError> {
        match self.entries.into_iter().next() {
            None => Ok(()),
            Some((key, (line, _))) => Err(CliError::Input {
                path: self.path,
                line,
                message: format!("unknown key `{key}`"),
            }),
        }
    }
}
