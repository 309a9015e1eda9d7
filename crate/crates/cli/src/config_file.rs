//! Line-oriented `key = value` settings files.
//!
//! ```text
//! # defaults for the lung runs
//! order = 6
//! alphabet = protein-20
//! seed = 7
//! ```
//!
//! Keys may use `-` or `_`; both are normalized to `_`. Later duplicates win.

use std::collections::BTreeMap;

use crate::UsageError;

pub const KEYS: &[&str] = &[
    "order",
    "alphabet",
    "mode",
    "unknown_policy",
    "overflow_policy",
    "normalization",
    "format",
    "encoder",
    "cgr_resolution",
    "seed",
    "jobs",
    "seq_column",
    "label_column",
    "id_column",
    "stratify",
];

pub fn parse(text: &str) -> Result<BTreeMap<String, String>, UsageError> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(UsageError(format!("config line {}: expected `key = value`", n + 1)));
        };
        let key = key.trim().replace('-', "_");
        let key = match key.as_str() {
            "unknown" => "unknown_policy".to_string(),
            "overflow" => "overflow_policy".to_string(),
            _ => key,
        };
        if !KEYS.contains(&key.as_str()) {
            return Err(UsageError(format!("config line {}: unknown key {key:?}", n + 1)));
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}
