//! Key-value configuration files and parameter resolution.
//!
//! Recognized keys are `E`, `E_C`, `T_R`, `T_H`, `N` and `seed`, one per
//! line as `key = value` (or `key: value`). `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;

use fridge_core::Temperature;

const KEYS: [&str; 6] = ["E", "E_C", "T_R", "T_H", "N", "seed"];

#[derive(Debug, Default, Clone, PartialEq)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once(['=', ':'])
                .ok_or_else(|| format!("config line {}: expected `key = value`", no + 1))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(format!("config line {}: unknown key {key:?} (expected one of {KEYS:?})", no + 1));
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(FileConfig { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

/// `inf`/`infinity` or a positive number.
pub fn parse_temperature(s: &str) -> Result<Temperature, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "infinite" => Ok(Temperature::Infinite),
        other => {
            let t: f64 = other.parse().map_err(|_| format!("invalid temperature {s:?}"))?;
            Temperature::finite(t).map_err(|e| e.to_string())
        }
    }
}

pub fn parse_energy(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|_| format!("invalid energy {s:?}"))?;
    if x.is_finite() && x >= 0.0 {
        Ok(x)
    } else {
        Err(format!("energy must be finite and non-negative, got {s:?}"))
    }
}

/// Flag value if given, else the file value, else `default`.
pub fn layered<T>(
    flag: Option<T>,
    file: &FileConfig,
    key: &str,
    parse: impl Fn(&str) -> Result<T, String>,
    default: Option<T>,
) -> Result<Option<T>, String> {
    if flag.is_some() {
        return Ok(flag);
    }
    match file.get(key) {
        Some(v) => parse(v).map(Some).map_err(|e| format!("config key {key}: {e}")),
        None => Ok(default),
    }
}

/// Seed precedence: flag, then `FRIDGE_SEED`, then the file, then `default`.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>, file: &FileConfig, default: u64) -> Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Some(v) = env {
        return parse_seed(v).map_err(|e| format!("FRIDGE_SEED: {e}"));
    }
    if let Some(v) = file.get("seed") {
        return parse_seed(v).map_err(|e| format!("config key seed: {e}"));
    }
    Ok(default)
}

/// Decimal or `0x`-prefixed hexadecimal.
pub fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => s.replace('_', "").parse(),
    };
    parsed.map_err(|_| format!("invalid seed {s:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_separators_and_comments() {
        let cfg = FileConfig::parse("# machine\nE = 1\nE_C: 0.4  # cold\n\nT_H=inf\n").unwrap();
        assert_eq!(cfg.get("E"), Some("1"));
        assert_eq!(cfg.get("E_C"), Some("0.4"));
        assert_eq!(cfg.get("T_H"), Some("inf"));
        assert_eq!(cfg.get("T_R"), None);
    }

    #[test]
    fn rejects_unknown_keys_and_bare_lines() {
        assert!(FileConfig::parse("E_B = 1").is_err());
        assert!(FileConfig::parse("E 1").is_err());
    }

    #[test]
    fn flags_override_file() {
        let cfg = FileConfig::parse("E = 2").unwrap();
        assert_eq!(layered(Some(3.0), &cfg, "E", parse_energy, Some(1.0)).unwrap(), Some(3.0));
        assert_eq!(layered(None, &cfg, "E", parse_energy, Some(1.0)).unwrap(), Some(2.0));
        assert_eq!(layered(None, &cfg, "E_C", parse_energy, Some(0.4)).unwrap(), Some(0.4));
    }

    #[test]
    fn seed_precedence() {
        let cfg = FileConfig::parse("seed = 5").unwrap();
        assert_eq!(resolve_seed(Some(1), Some("2"), &cfg, 9).unwrap(), 1);
        assert_eq!(resolve_seed(None, Some("0x10"), &cfg, 9).unwrap(), 16);
        assert_eq!(resolve_seed(None, None, &cfg, 9).unwrap(), 5);
        assert_eq!(resolve_seed(None, None, &FileConfig::default(), 9).unwrap(), 9);
        assert!(resolve_seed(None, Some("x"), &cfg, 9).is_err());
    }

    #[test]
    fn temperatures() {
        assert_eq!(parse_temperature("inf").unwrap(), Temperature::Infinite);
        assert_eq!(parse_temperature("2.5").unwrap(), Temperature::Finite(2.5));
        assert!(parse_temperature("-1").is_err());
        assert!(parse_temperature("hot").is_err());
    }
}
