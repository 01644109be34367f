use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// Frequency table over non-negative integer values.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Histogram(BTreeMap<u32, u64>);

impl Histogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_values(values: impl IntoIterator<Item = u32>) -> Self {
        let mut h = Histogram::new();
        for v in values {
            h.add(v, 1);
        }
        h
    }

    pub fn from_counts(counts: impl IntoIterator<Item = (u32, u64)>) -> Self {
        let mut h = Histogram::new();
        for (v, c) in counts {
            h.add(v, c);
        }
        h
    }

    pub fn add(&mut self, value: u32, count: u64) {
        if count > 0 {
            *self.0.entry(value).or_default() += count;
        }
    }

    pub fn merge(&mut self, other: &Histogram) {
        for (&v, &c) in &other.0 {
            self.add(v, c);
        }
    }

    pub fn get(&self, value: u32) -> u64 {
        self.0.get(&value).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_value(&self) -> Option<u32> {
        self.0.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.0.iter().map(|(&v, &c)| (v, c))
    }

    /// Share of the total mass at `value`.
    pub fn share(&self, value: u32) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        self.get(value) as f64 / total as f64
    }

    /// Share of mass with `lo <= value <= hi`.
    pub fn share_between(&self, lo: u32, hi: u32) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        self.0.range(lo..=hi).map(|(_, &c)| c).sum::<u64>() as f64 / total as f64
    }

    /// Keeps only values in `lo..=hi`.
    pub fn restricted(&self, lo: u32, hi: u32) -> Histogram {
        Histogram(self.0.range(lo..=hi).map(|(&v, &c)| (v, c)).collect())
    }

    /// Counts at `lo..=hi`, zeros included.
    pub fn dense(&self, lo: u32, hi: u32) -> Vec<u64> {
        (lo..=hi).map(|v| self.get(v)).collect()
    }

    /// `value,count` CSV with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,count\n");
        for (v, c) in self.iter() {
            let _ = writeln!(out, "{v},{c}");
        }
        out
    }
}
