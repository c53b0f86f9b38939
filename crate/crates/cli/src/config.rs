//! Flat `key = value` sweep configuration with repeated `[identity ID]` blocks.

use std::collections::BTreeMap;
use std::path::Path;

use qseries::identities::{lookup, register_all, Mode, Strategy};
use qseries::Policy;
use serde::Serialize;

use crate::error::CliError;

/// How an identity is evaluated in a sweep. `Auto` picks exact arithmetic
/// whenever the entry supports it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeChoice {
    Auto,
    Exact,
    Float,
}

impl ModeChoice {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "auto" => Ok(ModeChoice::Auto),
            "exact" => Ok(ModeChoice::Exact),
            "float" => Ok(ModeChoice::Float),
            other => Err(CliError::Config(format!(
                "unknown mode `{other}` (expected auto, exact or float)"
            ))),
        }
    }

    pub fn resolve(self, exact_capable: bool) -> Mode {
        match self {
            ModeChoice::Exact => Mode::Exact,
            ModeChoice::Float => Mode::Float,
            ModeChoice::Auto if exact_capable => Mode::Exact,
            ModeChoice::Auto => Mode::Float,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Per-identity overrides; `None` falls back to the global value.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct IdentityBlock {
    pub mode: Option<ModeChoice>,
    pub count: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub strategy: Option<Strategy>,
    pub ranges: BTreeMap<String, (f64, f64)>,
}

/// Everything that determines a sweep. Serialized verbatim into the report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    /// `all`, `exact-capable`, or explicit IDs.
    pub identities: Vec<String>,
    pub mode: ModeChoice,
    pub seed: u64,
    pub count: usize,
    pub strategy: Strategy,
    pub tol: Option<f64>,
    pub policy: Policy,
    pub format: Format,
    /// Worker count. Left out of the report: it must not change the bytes.
    #[serde(skip)]
    pub parallel: usize,
    /// Include wall time in the report. Off by default so reports stay
    /// byte-stable.
    pub timing: bool,
    pub blocks: BTreeMap<String, IdentityBlock>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            identities: vec!["exact-capable".into()],
            mode: ModeChoice::Auto,
            seed: 0,
            count: 20,
            strategy: Strategy::Random,
            tol: None,
            policy: Policy::default(),
            format: Format::Json,
            parallel: 1,
            timing: false,
            blocks: BTreeMap::new(),
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, v: &str, line: usize) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| CliError::Config(format!("line {line}: `{key}` cannot take the value `{v}`")))
}

fn range(key: &str, v: &str, line: usize) -> Result<(f64, f64), CliError> {
    let (lo, hi) = v
        .split_once(',')
        .ok_or_else(|| CliError::Config(format!("line {line}: `{key}` expects `lo,hi`")))?;
    let lo: f64 = num(key, lo.trim(), line)?;
    let hi: f64 = num(key, hi.trim(), line)?;
    if !(lo <= hi) {
        return Err(CliError::Config(format!("line {line}: `{key}` has lo > hi")));
    }
    Ok((lo, hi))
}

fn strategy(v: &str, line: usize) -> Result<Strategy, CliError> {
    v.parse()
        .map_err(|e: qseries::QError| CliError::Config(format!("line {line}: {e}")))
}

impl SweepConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = SweepConfig::default();
        let mut current: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(head) = body.strip_prefix('[') {
                let head = head
                    .strip_suffix(']')
                    .ok_or_else(|| CliError::Config(format!("line {line}: unclosed `[`")))?;
                let id = head
                    .trim()
                    .strip_prefix("identity")
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .ok_or_else(|| {
                        CliError::Config(format!("line {line}: expected `[identity ID]`"))
                    })?;
                lookup(id).map_err(|e| CliError::Config(format!("line {line}: {e}")))?;
                cfg.blocks.entry(id.to_string()).or_default();
                current = Some(id.to_string());
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| CliError::Config(format!("line {line}: expected `key = value`")))?;
            match &current {
                Some(id) => {
                    let block = cfg.blocks.get_mut(id).expect("block inserted on header");
                    match key {
                        "mode" => block.mode = Some(ModeChoice::parse(value)?),
                        "count" => block.count = Some(num(key, value, line)?),
                        "seed" => block.seed = Some(num(key, value, line)?),
                        "tol" => block.tol = Some(num(key, value, line)?),
                        "strategy" => block.strategy = Some(strategy(value, line)?),
                        _ => match key.strip_prefix("range.") {
                            Some(slot) => {
                                block.ranges.insert(slot.to_string(), range(key, value, line)?);
                            }
                            None => {
                                return Err(CliError::Config(format!(
                                    "line {line}: unknown identity key `{key}`"
                                )))
                            }
                        },
                    }
                }
                None => match key {
                    "identities" => {
                        cfg.identities = value
                            .split(',')
                            .map(|s| s.trim().to_string())
                            .filter(|s| !s.is_empty())
                            .collect()
                    }
                    "mode" => cfg.mode = ModeChoice::parse(value)?,
                    "seed" => cfg.seed = num(key, value, line)?,
                    "count" => cfg.count = num(key, value, line)?,
                    "strategy" => cfg.strategy = strategy(value, line)?,
                    "tol" => cfg.tol = Some(num(key, value, line)?),
                    "format" => {
                        cfg.format = match value {
                            "json" => Format::Json,
                            "csv" => Format::Csv,
                            other => {
                                return Err(CliError::Config(format!(
                                    "line {line}: unknown format `{other}`"
                                )))
                            }
                        }
                    }
                    "parallel" => cfg.parallel = num(key, value, line)?,
                    "timing" => cfg.timing = num(key, value, line)?,
                    "policy.rel_tol" => cfg.policy.rel_tol = num(key, value, line)?,
                    "policy.n_max" => cfg.policy.n_max = num(key, value, line)?,
                    "policy.margin" => cfg.policy.margin = num(key, value, line)?,
                    "policy.product_cutoff" => cfg.policy.product_cutoff = num(key, value, line)?,
                    "policy.q_max" => cfg.policy.q_max = num(key, value, line)?,
                    _ => {
                        return Err(CliError::Config(format!("line {line}: unknown key `{key}`")))
                    }
                },
            }
        }
        cfg.selected()?;
        Ok(cfg)
    }

    /// Selected IDs in registry order, followed by any block-only IDs.
    pub fn selected(&self) -> Result<Vec<&'static str>, CliError> {
        let mut out: Vec<&'static str> = Vec::new();
        let mut push = |id: &'static str| {
            if !out.contains(&id) {
                out.push(id);
            }
        };
        for sel in &self.identities {
            match sel.as_str() {
                "all" => register_all().iter().for_each(|d| push(d.id)),
                "exact-capable" => register_all()
                    .iter()
                    .filter(|d| d.exact_capable)
                    .for_each(|d| push(d.id)),
                "none" => {}
                id => push(lookup(id)?.id),
            }
        }
        for id in self.blocks.keys() {
            push(lookup(id)?.id);
        }
        let order = |id: &str| register_all().iter().position(|d| d.id == id);
        out.sort_by_key(|id| order(id));
        Ok(out)
    }
}
