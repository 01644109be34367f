//! Side-by-side scoring of model output against observed stylized facts.

use serde::{Deserialize, Serialize};

use crate::empirics::StylizedFacts;
use crate::error::Result;
use crate::hist::Histogram;
use crate::stats::{ks_two_sample_hist, pearson, KsResult};

/// The three distributions a model is validated on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distributions {
    pub counts_hist: Histogram,
    pub duration_counts: Histogram,
    pub wait_counts: Histogram,
}

impl StylizedFacts {
    pub fn distributions(&self) -> Distributions {
        Distributions {
            counts_hist: self.counts_hist.clone(),
            duration_counts: self.duration_counts.clone(),
            wait_counts: self.wait_counts.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionComparison {
    pub ks: KsResult,
    /// Correlation of the two share vectors over the common support;
    /// `None` when either is constant.
    pub correlation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShareRow {
    pub duration: u32,
    pub actual: f64,
    pub model: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub counts: DistributionComparison,
    pub durations: DistributionComparison,
    pub waits: DistributionComparison,
    pub waits_1_25: DistributionComparison,
    pub waits_1_31: DistributionComparison,
    pub duration_shares: Vec<ShareRow>,
}

impl Comparison {
    /// Sum of the three KS distances; lower is better.
    pub fn score(&self) -> f64 {
        self.counts.ks.statistic + self.durations.ks.statistic + self.waits.ks.statistic
    }
}

fn shares(h: &Histogram, lo: u32, hi: u32) -> Vec<f64> {
    let total = h.total().max(1) as f64;
    h.dense(lo, hi).into_iter().map(|c| c as f64 / total).collect()
}

fn compare_one(actual: &Histogram, model: &Histogram) -> Result<DistributionComparison> {
    let ks = ks_two_sample_hist(actual, model)?;
    let lo = actual.iter().chain(model.iter()).map(|(v, _)| v).min().unwrap_or(0);
    let hi = actual.max_value().max(model.max_value()).unwrap_or(0);
    let correlation = pearson(&shares(actual, lo, hi), &shares(model, lo, hi)).ok();
    Ok(DistributionComparison { ks, correlation })
}

pub fn compare(actual: &Distributions, model: &Distributions) -> Result<Comparison> {
    let waits_in = |lo, hi| {
        compare_one(
            &actual.wait_counts.restricted(lo, hi),
            &model.wait_counts.restricted(lo, hi),
        )
    };
    let max_d = actual
        .duration_counts
        .max_value()
        .max(model.duration_counts.max_value())
        .unwrap_or(0)
        .max(7);
    Ok(Comparison {
        counts: compare_one(&actual.counts_hist, &model.counts_hist)?,
        durations: compare_one(&actual.duration_counts, &model.duration_counts)?,
        waits: compare_one(&actual.wait_counts, &model.wait_counts)?,
        waits_1_25: waits_in(1, 25)?,
        waits_1_31: waits_in(1, 31)?,
        duration_shares: (1..=max_d)
            .map(|d| ShareRow {
                duration: d,
                actual: actual.duration_counts.share(d),
                model: model.duration_counts.share(d),
            })
            .collect(),
    })
}
