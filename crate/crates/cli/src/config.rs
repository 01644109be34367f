use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::Context;
use cascade_core::{ModelParams, RewiringMode, ThresholdMode};
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Everything needed to reproduce a simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    #[serde(flatten)]
    pub model: ModelParams,
    /// `country,size` CSV; the bundled synthetic roster when absent.
    pub roster_path: Option<PathBuf>,
    pub equal_sizes: bool,
    pub n_runs: u64,
    pub master_seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: ModelParams::default(),
            roster_path: None,
            equal_sizes: false,
            n_runs: 5000,
            master_seed: 42,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text)
            .map_err(|e| ConfigError(format!("{}: {e}", path.display())))
            .map_err(Into::into)
    }
}

/// Parses `lo,hi`.
pub fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or_else(|| format!("expected `lo,hi`, got `{s}`"))?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("`{v}` is not a number"));
    Ok((parse(lo)?, parse(hi)?))
}

pub fn parse_rewiring(s: &str) -> Result<RewiringMode, String> {
    match s {
        "degree-preserving-swap" | "swap" => Ok(RewiringMode::DegreePreservingSwap),
        "endpoint-rewire" | "endpoint" => Ok(RewiringMode::EndpointRewire),
        _ => Err(format!("unknown rewiring mode `{s}` (degree-preserving-swap | endpoint-rewire)")),
    }
}

pub fn parse_thresholds(s: &str) -> Result<ThresholdMode, String> {
    match s {
        "per-run" => Ok(ThresholdMode::PerRun),
        "per-step" => Ok(ThresholdMode::PerStep),
        _ => Err(format!("unknown threshold mode `{s}` (per-run | per-step)")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_are_calibration() {
        let c: RunConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.n_runs, 5000);
        assert_eq!(c.model.k, 2);
    }

    #[test]
    fn config_overrides() {
        let c: RunConfig = serde_json::from_str(r#"{"mu": 0.2, "n_runs": 10, "rewiring_mode": "endpoint-rewire"}"#).unwrap();
        assert_eq!(c.model.mu, 0.2);
        assert_eq!(c.n_runs, 10);
        assert_eq!(c.model.rewiring_mode, RewiringMode::EndpointRewire);
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0.01,0.11"), Ok((0.01, 0.11)));
        assert!(parse_range("0.1").is_err());
        assert!(parse_range("a,b").is_err());
    }
}
