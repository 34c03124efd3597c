//! Flat `key = value` configuration files.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Blank lines and lines starting with `#` are skipped. Keys use the
    /// long flag names; `-` and `_` are interchangeable.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key=value", n + 1))
            })?;
            let key = normalize(key.trim());
            if key.is_empty() {
                return Err(CliError::Usage(format!("config line {}: empty key", n + 1)));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    /// Rejects keys the current subcommand does not know.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), CliError> {
        for key in self.values.keys() {
            if !allowed.iter().any(|a| normalize(a) == *key) {
                return Err(CliError::Usage(format!("unknown config key `{key}`")));
            }
        }
        Ok(())
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(&normalize(key)).map(String::as_str)
    }

    /// The flag value if given, else the parsed config value.
    pub fn pick<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key `{key}`: {e}"))),
        }
    }
}

fn normalize(key: &str) -> String {
    key.replace('-', "_")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_overrides() {
        let cfg = ConfigFile::parse("# comment\nxp = 1.5\n\nrel-tol=1e-8\n").unwrap();
        assert_eq!(cfg.pick::<f64>(None, "xp").unwrap(), Some(1.5));
        assert_eq!(cfg.pick(Some(2.0), "xp").unwrap(), Some(2.0));
        assert_eq!(cfg.pick::<f64>(None, "rel_tol").unwrap(), Some(1e-8));
        assert_eq!(cfg.pick::<f64>(None, "y").unwrap(), None);
        assert!(cfg.check_keys(&["xp", "rel-tol"]).is_ok());
        assert!(cfg.check_keys(&["xp"]).is_err());
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(ConfigFile::parse("xp 1"), Err(CliError::Usage(_))));
        let cfg = ConfigFile::parse("xp = one").unwrap();
        assert!(matches!(
            cfg.pick::<f64>(None, "xp"),
            Err(CliError::Usage(_))
        ));
    }
}
