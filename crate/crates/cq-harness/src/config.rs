//! Flat `key=value` run configuration.
//!
//! A config file contributes defaults; command-line flags overlay them
//! (flags win).  Values stay strings until a typed accessor pulls them
//! out, so every parse failure carries the key name.

use std::collections::BTreeMap;
use std::path::Path;

use crate::{config_error, HarnessError};

#[derive(Clone, Debug, Default)]
pub struct Settings {
    map: BTreeMap<String, String>,
}

impl Settings {
    pub fn new() -> Self {
        Settings::default()
    }

    /// Parses a flat key=value file: one pair per line, `#` comments,
    /// blank lines ignored, values may contain `=`.
    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        let mut settings = Settings::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                config_error(format!(
                    "{}:{}: expected key=value, got '{line}'",
                    path.display(),
                    idx + 1
                ))
            })?;
            settings
                .map
                .insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(settings)
    }

    /// Overlays one value (used for CLI flags; flags override the file).
    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.map.insert(key.to_string(), value.to_string());
    }

    /// Overlays an optional flag; `None` leaves the file value in place.
    pub fn overlay<T: ToString>(&mut self, key: &str, value: &Option<T>) {
        if let Some(v) = value {
            self.set(key, v.to_string());
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    pub fn string_or(&self, key: &str, default: &str) -> String {
        self.get(key).unwrap_or(default).to_string()
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, HarnessError> {
        match self.get(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse()
                .map_err(|_| config_error(format!("{key}: expected a number, got '{raw}'"))),
        }
    }

    /// Like [`Settings::f64_or`] but additionally demands a finite value
    /// strictly greater than zero.
    pub fn positive_f64_or(&self, key: &str, default: f64) -> Result<f64, HarnessError> {
        let v = self.f64_or(key, default)?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(config_error(format!("{key}: must be positive, got {v}")));
        }
        Ok(v)
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, HarnessError> {
        match self.get(key) {
            None => Ok(default),
            Some(raw) => raw.parse().map_err(|_| {
                config_error(format!("{key}: expected a nonnegative integer, got '{raw}'"))
            }),
        }
    }

    pub fn bool_or(&self, key: &str, default: bool) -> Result<bool, HarnessError> {
        match self.get(key) {
            None => Ok(default),
            Some("true") | Some("1") => Ok(true),
            Some("false") | Some("0") => Ok(false),
            Some(raw) => Err(config_error(format!(
                "{key}: expected true/false, got '{raw}'"
            ))),
        }
    }

    /// Comma-separated list of numbers; empty/absent gives an empty list.
    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>, HarnessError> {
        match self.get(key) {
            None | Some("") => Ok(Vec::new()),
            Some(raw) => raw
                .split(',')
                .map(|item| {
                    item.trim().parse().map_err(|_| {
                        config_error(format!("{key}: expected numbers, got '{item}'"))
                    })
                })
                .collect(),
        }
    }

    /// `WxH` grid-size syntax, e.g. `160x120`.
    pub fn grid_size(&self, key: &str) -> Result<Option<(usize, usize)>, HarnessError> {
        match self.get(key) {
            None | Some("") => Ok(None),
            Some(raw) => {
                let (w, h) = raw.split_once(['x', 'X']).ok_or_else(|| {
                    config_error(format!("{key}: expected WxH, got '{raw}'"))
                })?;
                let parse = |part: &str| {
                    part.trim().parse::<usize>().map_err(|_| {
                        config_error(format!("{key}: expected WxH integers, got '{raw}'"))
                    })
                };
                let (w, h) = (parse(w)?, parse(h)?);
                if w == 0 || h == 0 {
                    return Err(config_error(format!(
                        "{key}: grid must be nonempty, got '{raw}'"
                    )));
                }
                Ok(Some((w, h)))
            }
        }
    }

    /// Comma-separated `x:y` point list, e.g. `0:0,0.3:-0.2`.
    pub fn point_list(&self, key: &str) -> Result<Vec<(f64, f64)>, HarnessError> {
        match self.get(key) {
            None | Some("") => Ok(Vec::new()),
            Some(raw) => raw
                .split(',')
                .map(|item| {
                    let bad =
                        || config_error(format!("{key}: expected x:y pairs, got '{item}'"));
                    let (x, y) = item.trim().split_once(':').ok_or_else(bad)?;
                    Ok((
                        x.trim().parse().map_err(|_| bad())?,
                        y.trim().parse().map_err(|_| bad())?,
                    ))
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn settings_from(text: &str) -> Settings {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(text.as_bytes()).unwrap();
        Settings::from_file(file.path()).unwrap()
    }

    #[test]
    fn parses_pairs_comments_and_blanks() {
        let s = settings_from(
            "# a comment\n\nscheme = bdf2\nkappa=0.125\nsnapshots=1.0, 2.5,4\nnote=a=b\n",
        );
        assert_eq!(s.get("scheme"), Some("bdf2"));
        assert_eq!(s.f64_or("kappa", 1.0).unwrap(), 0.125);
        assert_eq!(s.f64_list("snapshots").unwrap(), vec![1.0, 2.5, 4.0]);
        // Values may contain '=' (split on the first one only).
        assert_eq!(s.get("note"), Some("a=b"));
    }

    #[test]
    fn flags_override_file_values() {
        let mut s = settings_from("kappa=0.5\nscheme=be\n");
        s.overlay("kappa", &Some(0.25f64));
        s.overlay::<f64>("steps", &None);
        assert_eq!(s.f64_or("kappa", 1.0).unwrap(), 0.25);
        assert_eq!(s.get("scheme"), Some("be"));
        assert_eq!(s.usize_or("steps", 64).unwrap(), 64);
    }

    #[test]
    fn malformed_input_is_reported_with_context() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(b"fine=1\nnot a pair\n").unwrap();
        match Settings::from_file(file.path()) {
            Err(HarnessError::Config { detail }) => {
                assert!(detail.contains(":2:"), "{detail}");
            }
            other => panic!("expected config error, got {other:?}"),
        }

        let s = settings_from("kappa=fast\ngrid=12\npoints=1;2\nflag=maybe\n");
        assert!(s.f64_or("kappa", 1.0).is_err());
        assert!(s.grid_size("grid").is_err());
        assert!(s.point_list("points").is_err());
        assert!(s.bool_or("flag", false).is_err());
        assert!(s.positive_f64_or("missing", -1.0).is_err());
    }

    #[test]
    fn grid_and_point_syntax() {
        let s = settings_from("grid=160x120\nprobes=0:0, 1.5:-2\n");
        assert_eq!(s.grid_size("grid").unwrap(), Some((160, 120)));
        assert_eq!(s.grid_size("absent").unwrap(), None);
        assert_eq!(
            s.point_list("probes").unwrap(),
            vec![(0.0, 0.0), (1.5, -2.0)]
        );
    }
}
