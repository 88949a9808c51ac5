//! Optional JSON config file whose keys mirror the long flag names.
//!
//! The file holds one flat object of scalars; list-valued parameters use
//! the same comma syntax as the flags (`"ells": "5,7"`). Flags win over
//! file values, and any key the chosen experiment does not understand is
//! a usage error rather than a silent ignore.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde_json::Value;
use sievelab_core::{Error, Result};

#[derive(Debug)]
pub struct FileConfig {
    entries: BTreeMap<String, Value>,
}

fn type_err(key: &str, want: &str) -> Error {
    Error::Domain(format!("config key {key} must be {want}"))
}

impl FileConfig {
    pub fn empty() -> FileConfig {
        FileConfig { entries: BTreeMap::new() }
    }

    pub fn load(path: &Path) -> Result<FileConfig> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Domain(format!("cannot read config {}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| Error::Domain(format!("config {} is not valid JSON: {e}", path.display())))?;
        let Value::Object(map) = value else {
            return Err(Error::Domain("config file must hold a single JSON object".into()));
        };
        let mut entries = BTreeMap::new();
        for (k, v) in map {
            if !matches!(v, Value::String(_) | Value::Number(_) | Value::Bool(_)) {
                return Err(Error::Domain(format!(
                    "config key {k} must be a scalar; lists use the flag syntax, e.g. \"5,7\""
                )));
            }
            entries.insert(k, v);
        }
        Ok(FileConfig { entries })
    }

    /// Rejects keys outside the runner's and the experiment's vocabulary.
    pub fn reject_unknown(&self, allowed: &[&str]) -> Result<()> {
        for key in self.entries.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::Domain(format!(
                    "unknown config key {key}; this experiment accepts {}",
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    pub fn u64(&self, key: &str) -> Result<Option<u64>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v.as_u64().map(Some).ok_or_else(|| type_err(key, "a nonnegative integer")),
        }
    }

    pub fn i64(&self, key: &str) -> Result<Option<i64>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v.as_i64().map(Some).ok_or_else(|| type_err(key, "an integer")),
        }
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v.as_f64().map(Some).ok_or_else(|| type_err(key, "a number")),
        }
    }

    pub fn string(&self, key: &str) -> Result<Option<String>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_str()
                .map(|s| Some(s.to_string()))
                .ok_or_else(|| type_err(key, "a string")),
        }
    }

    pub fn bool(&self, key: &str) -> Result<Option<bool>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v.as_bool().map(Some).ok_or_else(|| type_err(key, "a boolean")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_config(text: &str) -> (tempfile::TempDir, std::path::PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        let mut f = fs::File::create(&path).unwrap();
        f.write_all(text.as_bytes()).unwrap();
        (dir, path)
    }

    #[test]
    fn scalars_round_trip() {
        let (_dir, path) = write_config(r#"{"n": 3, "B": 50, "ells": "5,7", "self-test": true}"#);
        let cfg = FileConfig::load(&path).unwrap();
        assert_eq!(cfg.u64("n").unwrap(), Some(3));
        assert_eq!(cfg.i64("B").unwrap(), Some(50));
        assert_eq!(cfg.string("ells").unwrap().as_deref(), Some("5,7"));
        assert_eq!(cfg.bool("self-test").unwrap(), Some(true));
        assert_eq!(cfg.u64("absent").unwrap(), None);
    }

    #[test]
    fn wrong_types_are_domain_errors() {
        let (_dir, path) = write_config(r#"{"n": "three"}"#);
        let cfg = FileConfig::load(&path).unwrap();
        assert!(matches!(cfg.u64("n").unwrap_err(), Error::Domain(_)));
    }

    #[test]
    fn nested_values_are_rejected() {
        let (_dir, path) = write_config(r#"{"ells": [5, 7]}"#);
        assert!(matches!(FileConfig::load(&path).unwrap_err(), Error::Domain(_)));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let (_dir, path) = write_config(r#"{"n": 3, "mystery": 1}"#);
        let cfg = FileConfig::load(&path).unwrap();
        assert!(cfg.reject_unknown(&["n"]).is_err());
        assert!(cfg.reject_unknown(&["n", "mystery"]).is_ok());
    }

    #[test]
    fn non_object_files_are_rejected() {
        let (_dir, path) = write_config("[1, 2]");
        assert!(matches!(FileConfig::load(&path).unwrap_err(), Error::Domain(_)));
    }
}
