//! Flat `key = value` config files. Keys are the long flag names without
//! the leading dashes; relative paths are taken from the file's directory.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::{CliResult, Failure};

#[derive(Debug, Default)]
pub struct ConfigFile {
    dir: PathBuf,
    entries: BTreeMap<String, (usize, String)>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)?;
        cfg.dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Failure::usage(format!("config line {}: expected key = value", i + 1)))?;
            let key = k.trim().to_string();
            if entries.insert(key.clone(), (i + 1, v.trim().to_string())).is_some() {
                return Err(Failure::usage(format!("config line {}: duplicate key {key:?}", i + 1)));
            }
        }
        Ok(ConfigFile { dir: PathBuf::new(), entries })
    }

    pub fn raw(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key).map(|(_, v)| v)
    }

    pub fn value<T: FromStr>(&mut self, key: &str) -> CliResult<Option<T>> {
        match self.entries.remove(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| Failure::usage(format!("config line {line}: bad value {v:?} for {key}"))),
        }
    }

    pub fn flag(&mut self, key: &str) -> CliResult<bool> {
        match self.entries.remove(key) {
            None => Ok(false),
            Some((_, v)) if v == "true" => Ok(true),
            Some((_, v)) if v == "false" => Ok(false),
            Some((line, v)) => Err(Failure::usage(format!("config line {line}: {key} must be true or false, got {v:?}"))),
        }
    }

    fn resolve(&self, p: &str) -> PathBuf {
        let p = Path::new(p);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.dir.join(p)
        }
    }

    pub fn path(&mut self, key: &str) -> CliResult<Option<PathBuf>> {
        Ok(self.raw(key).map(|v| self.resolve(&v)))
    }

    /// A value whose `prefix`-tagged form carries a path, e.g. `file:x.txt`.
    pub fn raw_with_paths(&mut self, key: &str, prefix: &str) -> Option<String> {
        let v = self.raw(key)?;
        Some(match v.strip_prefix(prefix) {
            Some(p) => format!("{prefix}{}", self.resolve(p).display()),
            None => v,
        })
    }

    /// Fails on keys no option consumed.
    pub fn finish(self) -> CliResult<()> {
        match self.entries.into_iter().next() {
            None => Ok(()),
            Some((k, (line, _))) => Err(Failure::usage(format!("config line {line}: unknown key {k:?}"))),
        }
    }
}
