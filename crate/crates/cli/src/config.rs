//! `key = value` configuration files.
//!
//! Keys are the long option names (`N`, `gamma-hat`, `rel-tol`, ...). Blank
//! lines and lines starting with `#` are skipped. A value given on the command
//! line always wins over the file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{CliError, CliResult};

pub const KEYS: &[&str] = &[
    "N",
    "Mabs",
    "Mphase",
    "min-uncertainty",
    "gamma0",
    "gamma-hat",
    "omega-dd",
    "delta",
    "deltas",
    "n-min",
    "n-max",
    "points",
    "init",
    "t",
    "samples",
    "step",
    "rel-tol",
    "abs-tol",
    "t-max",
    "eps",
    "fidelity",
    "format",
];

#[derive(Debug, Clone, Default)]
pub struct Config {
    path: PathBuf,
    entries: BTreeMap<String, (usize, String)>,
}

impl Config {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        let err = |line: usize, msg: String| CliError::Config {
            path: path.to_owned(),
            line,
            msg,
        };
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| err(i + 1, format!("expected key = value, got `{line}`")))?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(err(i + 1, format!("unknown key `{k}`")));
            }
            if entries.insert(k.to_owned(), (i + 1, v.to_owned())).is_some() {
                return Err(err(i + 1, format!("duplicate key `{k}`")));
            }
        }
        Ok(Self {
            path: path.to_owned(),
            entries,
        })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    fn parsed<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        let Some((line, v)) = self.entries.get(key) else {
            return Ok(None);
        };
        v.parse().map(Some).map_err(|_| CliError::Config {
            path: self.path.clone(),
            line: *line,
            msg: format!("cannot parse `{v}` for `{key}`"),
        })
    }

    /// Flag, then file, then `default`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> CliResult<T> {
        Ok(match flag {
            Some(v) => v,
            None => self.parsed(key)?.unwrap_or(default),
        })
    }

    pub fn pick_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.parsed(key),
        }
    }

    pub fn flag(&self, set: bool, key: &str) -> CliResult<bool> {
        if set {
            return Ok(true);
        }
        Ok(self.parsed(key)?.unwrap_or(false))
    }

    pub fn list(&self, flag: Option<Vec<f64>>, key: &str) -> CliResult<Option<Vec<f64>>> {
        if flag.is_some() {
            return Ok(flag);
        }
        let Some((line, v)) = self.entries.get(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
            .map_err(|_| CliError::Config {
                path: self.path.clone(),
                line: *line,
                msg: format!("cannot parse `{v}` as a list of numbers"),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> CliResult<Config> {
        Config::parse(text, Path::new("test.cfg"))
    }

    #[test]
    fn precedence() {
        let c = cfg("# comment\nN = 2\n\ngamma-hat=0.5\n").unwrap();
        assert_eq!(c.pick(Some(1.0), "N", 0.0).unwrap(), 1.0);
        assert_eq!(c.pick(None, "N", 0.0).unwrap(), 2.0);
        assert_eq!(c.pick(None, "delta", 0.25).unwrap(), 0.25);
        assert_eq!(c.pick_opt::<f64>(None, "Mabs").unwrap(), None);
    }

    #[test]
    fn lists_and_flags() {
        let c = cfg("deltas = 0, 0.5,1\nmin-uncertainty = true").unwrap();
        assert_eq!(c.list(None, "deltas").unwrap(), Some(vec![0.0, 0.5, 1.0]));
        assert_eq!(c.list(Some(vec![2.0]), "deltas").unwrap(), Some(vec![2.0]));
        assert!(c.flag(false, "min-uncertainty").unwrap());
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(cfg("bogus = 1"), Err(CliError::Config { line: 1, .. })));
        assert!(cfg("N 1").is_err());
        assert!(cfg("N = 1\nN = 2").is_err());
        let c = cfg("\nN = one").unwrap();
        match c.pick::<f64>(None, "N", 0.0) {
            Err(CliError::Config { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }
}
