//! GDP panel ingestion and extraction of the recession stylized facts.
//!
//! A recession year is a year of strictly negative real growth. Spells
//! are maximal runs of recession years; wait times are the gaps between
//! successive recession years of one country, so years before the first
//! and after the last recession never count and each extra year of a
//! multi-year spell contributes a wait of one.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hist::Histogram;

/// Real GDP levels, one column per country. `None` marks a missing cell.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelsTable {
    pub years: Vec<i32>,
    pub countries: Vec<String>,
    /// `values[country][year_index]`
    pub values: Vec<Vec<Option<f64>>>,
}

/// Percentage growth; missing unless both adjacent levels are present.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthTable {
    pub years: Vec<i32>,
    pub countries: Vec<String>,
    pub values: Vec<Vec<Option<f64>>>,
}

/// Recession indicators, present exactly where growth is present.
#[derive(Debug, Clone, PartialEq)]
pub struct RecessionPanel {
    pub years: Vec<i32>,
    pub countries: Vec<String>,
    pub indicators: Vec<Vec<Option<bool>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearCoverage {
    pub year: i32,
    pub observed: usize,
    pub in_recession: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StylizedFacts {
    /// Years by number of countries in recession.
    pub counts_hist: Histogram,
    pub duration_counts: Histogram,
    pub wait_counts: Histogram,
    pub total_spells: u64,
    /// Years in which the cross-country output total fell.
    pub aggregate_recession_years: Vec<i32>,
    /// Per-year count of countries with an observed growth rate.
    pub coverage: Vec<YearCoverage>,
}

impl LevelsTable {
    fn data_err(path: &Path, line: u64, column: &str, message: impl Into<String>) -> Error {
        Error::Data {
            path: path.to_path_buf(),
            line,
            column: column.to_string(),
            message: message.into(),
        }
    }
}

/// Reads a `year,<country>,...` CSV; blank cells are missing values.
pub fn load_gdp_csv(path: impl AsRef<Path>) -> Result<LevelsTable> {
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
    if headers.len() < 2 || &headers[0] != "year" {
        return Err(LevelsTable::data_err(path, 1, headers.get(0).unwrap_or(""), "header must be `year,<country>,...`"));
    }
    let countries: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
    for (i, name) in countries.iter().enumerate() {
        if name.is_empty() {
            return Err(LevelsTable::data_err(path, 1, "", format!("empty country name in column {}", i + 2)));
        }
        if countries[..i].contains(name) {
            return Err(LevelsTable::data_err(path, 1, name, "duplicate country column"));
        }
    }

    let mut years = Vec::new();
    let mut values = vec![Vec::new(); countries.len()];
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line());
        let year: i32 = record[0]
            .parse()
            .map_err(|_| LevelsTable::data_err(path, line, "year", format!("`{}` is not a year", &record[0])))?;
        if let Some(&prev) = years.last() {
            if year != prev + 1 {
                return Err(LevelsTable::data_err(
                    path,
                    line,
                    "year",
                    format!("year {year} does not follow {prev}; years must be contiguous and increasing"),
                ));
            }
        }
        years.push(year);
        for (c, name) in countries.iter().enumerate() {
            let cell = &record[c + 1];
            if cell.is_empty() {
                values[c].push(None);
                continue;
            }
            let level: f64 = cell
                .parse()
                .map_err(|_| LevelsTable::data_err(path, line, name, format!("`{cell}` is not a number")))?;
            if !(level.is_finite() && level > 0.0) {
                return Err(LevelsTable::data_err(path, line, name, format!("level must be positive, got {cell}")));
            }
            values[c].push(Some(level));
        }
    }
    if years.is_empty() {
        return Err(LevelsTable::data_err(path, 1, "year", "no data rows"));
    }
    Ok(LevelsTable { years, countries, values })
}

fn growth_series(levels: &[Option<f64>]) -> Vec<Option<f64>> {
    std::iter::once(None)
        .chain(levels.windows(2).map(|w| match (w[0], w[1]) {
            (Some(prev), Some(cur)) => Some(100.0 * (cur - prev) / prev),
            _ => None,
        }))
        .take(levels.len())
        .collect()
}

pub fn growth_rates(levels: &LevelsTable) -> GrowthTable {
    GrowthTable {
        years: levels.years.clone(),
        countries: levels.countries.clone(),
        values: levels.values.iter().map(|s| growth_series(s)).collect(),
    }
}

pub fn recession_panel(growth: &GrowthTable) -> RecessionPanel {
    RecessionPanel {
        years: growth.years.clone(),
        countries: growth.countries.clone(),
        indicators: growth
            .values
            .iter()
            .map(|s| s.iter().map(|g| g.map(|g| g < 0.0)).collect())
            .collect(),
    }
}

/// Lengths of the maximal runs of recession years.
pub fn spell_durations(series: &[bool]) -> Vec<u32> {
    let mut out = Vec::new();
    let mut run = 0u32;
    for &r in series {
        if r {
            run += 1;
        } else if run > 0 {
            out.push(run);
            run = 0;
        }
    }
    if run > 0 {
        out.push(run);
    }
    out
}

/// Gaps between successive recession years.
pub fn wait_times(recession_years: &[i32]) -> Vec<u32> {
    recession_years.windows(2).map(|w| (w[1] - w[0]) as u32).collect()
}

impl RecessionPanel {
    /// Builds a fully observed panel from a year-major boolean matrix.
    pub fn from_rows(years: Vec<i32>, countries: Vec<String>, rows: &[Vec<bool>]) -> Self {
        let indicators = (0..countries.len())
            .map(|c| rows.iter().map(|row| Some(row[c])).collect())
            .collect();
        RecessionPanel { years, countries, indicators }
    }

    /// Indicator series for one country, missing years read as no recession.
    pub fn country_series(&self, c: usize) -> Vec<bool> {
        self.indicators[c].iter().map(|x| x.unwrap_or(false)).collect()
    }

    pub fn recession_years(&self, c: usize) -> Vec<i32> {
        self.indicators[c]
            .iter()
            .zip(&self.years)
            .filter(|(x, _)| x.unwrap_or(false))
            .map(|(_, &y)| y)
            .collect()
    }

    pub fn coverage(&self) -> Vec<YearCoverage> {
        self.years
            .iter()
            .enumerate()
            .map(|(t, &year)| {
                let column = self.indicators.iter().map(|s| s[t]);
                YearCoverage {
                    year,
                    observed: column.clone().filter(Option::is_some).count(),
                    in_recession: column.filter(|x| *x == Some(true)).count(),
                }
            })
            .collect()
    }
}

/// Histogram of the number of countries in recession per year. Years in
/// which no country is observed are left out; unobserved countries count
/// as not in recession.
pub fn countries_per_year(panel: &RecessionPanel) -> Histogram {
    Histogram::from_values(
        panel
            .coverage()
            .into_iter()
            .filter(|c| c.observed > 0)
            .map(|c| c.in_recession as u32),
    )
}

/// Years in which the summed output of the countries observed in both
/// that year and the previous one fell.
pub fn aggregate_recessions(levels: &LevelsTable) -> Vec<i32> {
    (1..levels.years.len())
        .filter(|&t| {
            let (mut prev, mut cur) = (0.0, 0.0);
            for series in &levels.values {
                if let (Some(a), Some(b)) = (series[t - 1], series[t]) {
                    prev += a;
                    cur += b;
                }
            }
            prev > 0.0 && cur < prev
        })
        .map(|t| levels.years[t])
        .collect()
}

/// Counts histogram, spell durations and wait times of a panel.
pub fn panel_facts(panel: &RecessionPanel) -> StylizedFacts {
    let mut durations = Histogram::new();
    let mut waits = Histogram::new();
    for c in 0..panel.countries.len() {
        for d in spell_durations(&panel.country_series(c)) {
            durations.add(d, 1);
        }
        for w in wait_times(&panel.recession_years(c)) {
            waits.add(w, 1);
        }
    }
    StylizedFacts {
        counts_hist: countries_per_year(panel),
        total_spells: durations.total(),
        duration_counts: durations,
        wait_counts: waits,
        aggregate_recession_years: Vec::new(),
        coverage: panel.coverage(),
    }
}

/// All stylized facts of a levels table.
pub fn stylized_facts(levels: &LevelsTable) -> StylizedFacts {
    let panel = recession_panel(&growth_rates(levels));
    StylizedFacts {
        aggregate_recession_years: aggregate_recessions(levels),
        ..panel_facts(&panel)
    }
}
