//! Model parameters and the country roster.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How lattice edges selected for rewiring are replaced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RewiringMode {
    /// Selected edges are swapped pairwise, `(a,b),(c,d) -> (a,d),(c,b)`.
    /// Every vertex keeps its lattice degree.
    #[default]
    DegreePreservingSwap,
    /// Watts-Strogatz: one endpoint of each selected edge moves to a
    /// uniformly chosen vertex. Degrees drift.
    EndpointRewire,
}

/// When per-country import thresholds are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdMode {
    /// One threshold per country, drawn at the start of each run.
    #[default]
    PerRun,
    /// Fresh thresholds on every step.
    PerStep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelParams {
    pub pi_lo: f64,
    pub pi_hi: f64,
    pub rho_lo: f64,
    pub rho_hi: f64,
    pub tau_floor: f64,
    /// Lattice neighbours on each side; degree is `2k`.
    pub k: usize,
    pub mu: f64,
    pub n_countries: usize,
    pub n_steps: usize,
    /// Repeat the cascade within a step until no country changes.
    pub cascade_fixed_point: bool,
    pub rewiring_mode: RewiringMode,
    pub threshold_mode: ThresholdMode,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            pi_lo: 0.01,
            pi_hi: 0.11,
            rho_lo: 0.76,
            rho_hi: 1.0,
            tau_floor: 0.1,
            k: 2,
            mu: 0.08,
            n_countries: 17,
            n_steps: 136,
            cascade_fixed_point: true,
            rewiring_mode: RewiringMode::default(),
            threshold_mode: ThresholdMode::default(),
        }
    }
}

fn check_unit(field: &'static str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::params(field, format!("{v} is outside [0, 1]")));
    }
    Ok(())
}

fn check_range(lo_field: &'static str, lo: f64, hi: f64) -> Result<()> {
    if lo > hi {
        return Err(Error::params(lo_field, format!("lower bound {lo} exceeds upper bound {hi}")));
    }
    Ok(())
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        check_unit("pi_lo", self.pi_lo)?;
        check_unit("pi_hi", self.pi_hi)?;
        check_range("pi_lo", self.pi_lo, self.pi_hi)?;
        check_unit("rho_lo", self.rho_lo)?;
        check_unit("rho_hi", self.rho_hi)?;
        check_range("rho_lo", self.rho_lo, self.rho_hi)?;
        if !(0.0..1.0).contains(&self.tau_floor) {
            return Err(Error::params("tau_floor", format!("{} is outside [0, 1)", self.tau_floor)));
        }
        check_unit("mu", self.mu)?;
        if self.n_countries == 0 {
            return Err(Error::params("n_countries", "must be positive"));
        }
        if 2 * self.k >= self.n_countries {
            return Err(Error::params(
                "k",
                format!("2k = {} must be below n_countries = {}", 2 * self.k, self.n_countries),
            ));
        }
        Ok(())
    }

    /// The network-free variant: no lattice, no rewiring, same entry and
    /// recovery ranges.
    pub fn ablated(&self) -> ModelParams {
        ModelParams {
            k: 0,
            mu: 0.0,
            ..self.clone()
        }
    }

    pub fn mean_pi(&self) -> f64 {
        0.5 * (self.pi_lo + self.pi_hi)
    }

    pub fn mean_rho(&self) -> f64 {
        0.5 * (self.rho_lo + self.rho_hi)
    }

    /// Per-step exit probability of a country in recession when nothing
    /// pushes it back in: recover, then escape re-entry.
    pub fn mean_exit_probability(&self) -> f64 {
        self.mean_rho() * (1.0 - self.mean_pi())
    }
}

/// Country names and economy-size weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountryRoster {
    names: Vec<String>,
    sizes: Vec<f64>,
}

/// Synthetic stand-in for 1955 output levels of the seventeen economies,
/// in arbitrary units. Rounded magnitudes, not source data.
const SYNTHETIC_ROSTER: [(&str, f64); 17] = [
    ("Australia", 70.0),
    ("Austria", 30.0),
    ("Belgium", 50.0),
    ("Canada", 120.0),
    ("Denmark", 30.0),
    ("Finland", 20.0),
    ("France", 240.0),
    ("Germany", 300.0),
    ("Italy", 200.0),
    ("Japan", 240.0),
    ("Netherlands", 70.0),
    ("New Zealand", 15.0),
    ("Norway", 20.0),
    ("Sweden", 50.0),
    ("Switzerland", 40.0),
    ("United Kingdom", 360.0),
    ("United States", 1500.0),
];

impl CountryRoster {
    pub fn new(names: Vec<String>, sizes: Vec<f64>) -> Result<Self> {
        if names.len() != sizes.len() {
            return Err(Error::DimensionMismatch {
                context: "roster sizes",
                expected: names.len(),
                found: sizes.len(),
            });
        }
        if names.is_empty() {
            return Err(Error::params("roster", "no countries"));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::params("roster", format!("duplicate country `{name}`")));
            }
        }
        for (name, &s) in names.iter().zip(&sizes) {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::params("roster", format!("size of `{name}` must be positive, got {s}")));
            }
        }
        Ok(CountryRoster { names, sizes })
    }

    /// The bundled synthetic seventeen-country roster.
    pub fn synthetic() -> Self {
        let (names, sizes) = SYNTHETIC_ROSTER
            .iter()
            .map(|&(n, s)| (n.to_string(), s))
            .unzip();
        CountryRoster { names, sizes }
    }

    pub fn equal_sizes(n: usize) -> Self {
        CountryRoster {
            names: (0..n).map(|i| format!("country-{i:02}")).collect(),
            sizes: vec![1.0; n],
        }
    }

    /// Same names, every size set to 1.
    pub fn with_equal_sizes(&self) -> Self {
        CountryRoster {
            names: self.names.clone(),
            sizes: vec![1.0; self.names.len()],
        }
    }

    /// Reads a `country,size` CSV with a header row.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let csv_err = |source| Error::Csv {
            path: path.to_path_buf(),
            source,
        };
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(csv_err)?;
        let headers = reader.headers().map_err(csv_err)?.clone();
        if headers.len() != 2 || &headers[0] != "country" || &headers[1] != "size" {
            return Err(Error::Data {
                path: path.to_path_buf(),
                line: 1,
                column: headers.iter().collect::<Vec<_>>().join(","),
                message: "expected header `country,size`".into(),
            });
        }
        let mut names = Vec::new();
        let mut sizes = Vec::new();
        for record in reader.records() {
            let record = record.map_err(csv_err)?;
            let line = record.position().map_or(0, |p| p.line());
            let size: f64 = record[1].parse().map_err(|_| Error::Data {
                path: path.to_path_buf(),
                line,
                column: "size".into(),
                message: format!("`{}` is not a number", &record[1]),
            })?;
            names.push(record[0].to_string());
            sizes.push(size);
        }
        CountryRoster::new(names, sizes)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn sizes(&self) -> &[f64] {
        &self.sizes
    }
}
