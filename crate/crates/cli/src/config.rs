//! Flat `key = value` run configuration files.
//!
//! ```text
//! # Compliant regime
//! nc = 350
//! n1 = 50
//! na = 500
//! n2 = 100
//! p_c = 0.141429
//! p_a = 0.198
//! lambda = 10
//! mu = 34
//! ticks = 50000
//! runs = 10
//! seed = 1
//! strategy = heuristic
//! window_start = 20000
//! window_end = 50000
//! ```
//!
//! Required keys: `nc n1 na n2 p_c p_a lambda mu ticks`. Optional keys default
//! to `runs = 1`, `seed = 0`, `strategy = heuristic`, `window_start = 1`,
//! `window_end = ticks`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use netslice::{SimConfig, Strategy, SymbolUniverse};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key {key:?}")]
    Duplicate { line: usize, key: String },
    #[error("missing required key {0:?}")]
    Missing(&'static str),
    #[error("key {key:?}: cannot parse {value:?}")]
    Value { key: &'static str, value: String },
    #[error(transparent)]
    Universe(#[from] netslice::DesignError),
    #[error(transparent)]
    Param(#[from] netslice::ParamError),
}

const KEYS: [&str; 14] = [
    "n1",
    "nc",
    "n2",
    "na",
    "p_c",
    "p_a",
    "lambda",
    "mu",
    "ticks",
    "runs",
    "seed",
    "strategy",
    "window_start",
    "window_end",
];

struct Entries(BTreeMap<&'static str, String>);

impl Entries {
    fn get<T: std::str::FromStr>(&self, key: &'static str) -> Result<Option<T>, ConfigError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|_| ConfigError::Value {
                key,
                value: raw.clone(),
            }),
        }
    }

    fn require<T: std::str::FromStr>(&self, key: &'static str) -> Result<T, ConfigError> {
        self.get(key)?.ok_or(ConfigError::Missing(key))
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<SimConfig, ConfigError> {
    let mut entries = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or(ConfigError::Syntax { line })?;
        let key = key.trim();
        let known = KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            })?;
        if entries.insert(*known, value.trim().to_string()).is_some() {
            return Err(ConfigError::Duplicate {
                line,
                key: key.to_string(),
            });
        }
    }
    let e = Entries(entries);
    let ticks: u64 = e.require("ticks")?;
    let strategy = match e.0.get("strategy") {
        None => Strategy::Heuristic,
        Some(raw) => raw.parse()?,
    };
    let cfg = SimConfig {
        universe: SymbolUniverse::new(
            0,
            e.require("na")?,
            e.require("nc")?,
            e.require("n1")?,
            e.require("n2")?,
        )?,
        p_c: e.require("p_c")?,
        p_a: e.require("p_a")?,
        lambda: e.require("lambda")?,
        mu: e.require("mu")?,
        ticks,
        runs: e.get("runs")?.unwrap_or(1),
        seed: e.get("seed")?.unwrap_or(0),
        strategy,
        window_start: e.get("window_start")?.unwrap_or(1),
        window_end: e.get("window_end")?.unwrap_or(ticks),
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<SimConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}

/// Renders a configuration back to its file form (all keys, fixed order).
pub fn render_config(cfg: &SimConfig) -> String {
    let u = &cfg.universe;
    let mut out = String::new();
    let pairs: [(&str, String); 14] = [
        ("n1", u.hard_core().to_string()),
        ("nc", u.core().to_string()),
        ("n2", u.hard_access().to_string()),
        ("na", u.access().to_string()),
        ("p_c", cfg.p_c.to_string()),
        ("p_a", cfg.p_a.to_string()),
        ("lambda", cfg.lambda.to_string()),
        ("mu", cfg.mu.to_string()),
        ("ticks", cfg.ticks.to_string()),
        ("runs", cfg.runs.to_string()),
        ("seed", cfg.seed.to_string()),
        ("strategy", cfg.strategy.to_string()),
        ("window_start", cfg.window_start.to_string()),
        ("window_end", cfg.window_end.to_string()),
    ];
    for (k, v) in pairs {
        let _ = writeln!(out, "{k} = {v}");
    }
    out
}
