//! Plain-text `key = value` configuration files shared by the sweep and the
//! two applications. Blank lines and `#` comments are ignored.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: key {key:?} given twice")]
    Duplicate { line: usize, key: String },
    #[error("unknown key {0:?}")]
    Unknown(String),
    #[error("bad value {value:?} for {key}: {reason}")]
    BadValue { key: String, value: String, reason: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KvConfig {
    entries: BTreeMap<String, String>,
}

impl KvConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                text: raw.to_string(),
            })?;
            let key = k.trim();
            if key.is_empty() {
                return Err(ConfigError::Syntax {
                    line: i + 1,
                    text: raw.to_string(),
                });
            }
            if entries.insert(key.to_string(), v.trim().to_string()).is_some() {
                return Err(ConfigError::Duplicate {
                    line: i + 1,
                    key: key.to_string(),
                });
            }
        }
        Ok(Self { entries })
    }

    /// Sets or overrides a value (used for command-line flags).
    pub fn set(&mut self, key: &str, value: impl fmt::Display) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn get<T>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        self.entries
            .get(key)
            .map(|v| {
                v.parse().map_err(|e: T::Err| ConfigError::BadValue {
                    key: key.to_string(),
                    value: v.clone(),
                    reason: e.to_string(),
                })
            })
            .transpose()
    }

    pub fn get_or<T>(&self, key: &str, default: T) -> Result<T, ConfigError>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    /// Rejects keys outside `known`, catching typos in config files.
    pub fn check_known(&self, known: &[&str]) -> Result<(), ConfigError> {
        match self.entries.keys().find(|k| !known.contains(&k.as_str())) {
            Some(k) => Err(ConfigError::Unknown(k.clone())),
            None => Ok(()),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

impl fmt::Display for KvConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_overrides() {
        let mut c = KvConfig::parse("# sweep\ntau_L = -1.2\n\nnx=200 # cells\n").unwrap();
        assert_eq!(c.get::<f64>("tau_L").unwrap(), Some(-1.2));
        assert_eq!(c.get::<usize>("nx").unwrap(), Some(200));
        assert_eq!(c.get::<usize>("ny").unwrap(), None);
        c.set("nx", 50);
        assert_eq!(c.get_or("nx", 0usize).unwrap(), 50);
        assert_eq!(KvConfig::parse(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn reports_errors() {
        assert!(matches!(KvConfig::parse("a = 1\nnonsense"), Err(ConfigError::Syntax { line: 2, .. })));
        assert!(matches!(KvConfig::parse("a = 1\na = 2"), Err(ConfigError::Duplicate { line: 2, .. })));
        let c = KvConfig::parse("nx = many").unwrap();
        assert!(matches!(c.get::<usize>("nx"), Err(ConfigError::BadValue { .. })));
        assert_eq!(c.check_known(&["ny"]), Err(ConfigError::Unknown("nx".into())));
        assert!(c.check_known(&["nx"]).is_ok());
    }
}
