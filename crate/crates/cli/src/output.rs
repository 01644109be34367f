use std::fs;
use std::path::Path;

use anyhow::Context;
use cascade_core::compare::Distributions;
use serde::Serialize;

pub const REPORT_SCHEMA: &str = "recession-cascade/report/v1";
pub const FACTS_SCHEMA: &str = "recession-cascade/facts/v1";
pub const COMPARISON_SCHEMA: &str = "recession-cascade/comparison/v1";

pub fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

/// Writes `counts_hist.csv`, `durations.csv` and `waits.csv` into `dir`.
pub fn write_histograms(dir: &Path, d: &Distributions) -> anyhow::Result<()> {
    write_text(&dir.join("counts_hist.csv"), &d.counts_hist.to_csv())?;
    write_text(&dir.join("durations.csv"), &d.duration_counts.to_csv())?;
    write_text(&dir.join("waits.csv"), &d.wait_counts.to_csv())
}

/// Reads the three distributions from a facts or report JSON file.
pub fn load_distributions(path: &Path) -> anyhow::Result<Distributions> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let body = ["facts", "stats"]
        .iter()
        .find_map(|key| value.get(key))
        .unwrap_or(&value)
        .clone();
    serde_json::from_value(body).with_context(|| {
        format!(
            "{}: expected a facts or report file with counts_hist, duration_counts and wait_counts",
            path.display()
        )
    })
}
