use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Context;
use cascade_core::empirics::{load_gdp_csv, stylized_facts, StylizedFacts};
use cascade_core::engine::{ablation_params, monte_carlo, monte_carlo_with_threads, SweepRow};
use cascade_core::graph::path_length_curve;
use cascade_core::rng::seeded;
use cascade_core::stats::{fit_exp_rate_max_p, nls_exp_hist, ExpRateFit, ExpReference, NlsFit};
use cascade_core::{AggregateStats, Comparison, CountryRoster, Histogram, ModelParams, RewiringMode, ThresholdMode};
use clap::Args;
use serde::Serialize;

use crate::config::{parse_range, parse_rewiring, parse_thresholds, ConfigError, RunConfig};
use crate::output::{
    load_distributions, write_histograms, write_json, write_text, COMPARISON_SCHEMA, FACTS_SCHEMA, REPORT_SCHEMA,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Flags shared by commands that run the model.
#[derive(Debug, Args)]
pub struct ModelArgs {
    /// JSON file with RunConfig keys; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// `country,size` CSV of economy sizes.
    #[arg(long)]
    roster: Option<PathBuf>,
    /// Give every country the same weight.
    #[arg(long)]
    equal_sizes: bool,
    #[arg(long)]
    runs: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    tau_floor: Option<f64>,
    /// Entry probability range, `lo,hi`.
    #[arg(long, value_parser = parse_range)]
    pi: Option<(f64, f64)>,
    /// Recovery probability range, `lo,hi`.
    #[arg(long, value_parser = parse_range)]
    rho: Option<(f64, f64)>,
    #[arg(long)]
    steps: Option<usize>,
    /// Remove the network (k = 0, mu = 0).
    #[arg(long)]
    no_network: bool,
    /// Iterate the cascade to a fixed point within each step (default).
    #[arg(long, conflicts_with = "single_pass")]
    fixed_point: bool,
    /// One synchronous cascade pass per step.
    #[arg(long)]
    single_pass: bool,
    /// per-run | per-step
    #[arg(long, value_parser = parse_thresholds)]
    threshold_mode: Option<ThresholdMode>,
    /// degree-preserving-swap | endpoint-rewire
    #[arg(long, value_parser = parse_rewiring)]
    rewiring_mode: Option<RewiringMode>,
}

impl ModelArgs {
    fn resolve(&self) -> anyhow::Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let m = &mut c.model;
        if let Some(v) = self.mu {
            m.mu = v;
        }
        if let Some(v) = self.k {
            m.k = v;
        }
        if let Some(v) = self.tau_floor {
            m.tau_floor = v;
        }
        if let Some((lo, hi)) = self.pi {
            (m.pi_lo, m.pi_hi) = (lo, hi);
        }
        if let Some((lo, hi)) = self.rho {
            (m.rho_lo, m.rho_hi) = (lo, hi);
        }
        if let Some(v) = self.steps {
            m.n_steps = v;
        }
        if self.fixed_point {
            m.cascade_fixed_point = true;
        }
        if self.single_pass {
            m.cascade_fixed_point = false;
        }
        if let Some(v) = self.threshold_mode {
            m.threshold_mode = v;
        }
        if let Some(v) = self.rewiring_mode {
            m.rewiring_mode = v;
        }
        if self.no_network {
            *m = ablation_params(m);
        }
        if let Some(v) = self.runs {
            c.n_runs = v;
        }
        if let Some(v) = self.seed {
            c.master_seed = v;
        }
        if self.roster.is_some() {
            c.roster_path.clone_from(&self.roster);
        }
        c.equal_sizes |= self.equal_sizes;
        if c.n_runs == 0 {
            return Err(ConfigError("n_runs must be at least 1".into()).into());
        }
        c.model.validate()?;
        Ok(c)
    }
}

fn load_roster(config: &RunConfig) -> anyhow::Result<CountryRoster> {
    let roster = match &config.roster_path {
        Some(path) => CountryRoster::from_csv(path)?,
        None if config.model.n_countries == 17 => CountryRoster::synthetic(),
        None => CountryRoster::equal_sizes(config.model.n_countries),
    };
    if roster.len() != config.model.n_countries {
        return Err(ConfigError(format!(
            "roster has {} countries but n_countries is {}",
            roster.len(),
            config.model.n_countries
        ))
        .into());
    }
    Ok(if config.equal_sizes { roster.with_equal_sizes() } else { roster })
}

#[derive(Debug, Serialize)]
struct ShareEntry {
    duration: u32,
    share: f64,
}

#[derive(Debug, Serialize)]
struct Report<'a> {
    schema: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    roster: &'a CountryRoster,
    stats: &'a AggregateStats,
    duration_shares: Vec<ShareEntry>,
    duration_fit: Option<NlsFit>,
    notes: Vec<String>,
}

fn duration_fit(h: &Histogram) -> Option<NlsFit> {
    let max = h.max_value()?;
    match nls_exp_hist(h, 1, max.max(3)) {
        Ok(fit) => Some(fit),
        Err(e) => {
            log::warn!("duration fit skipped: {e}");
            None
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Worker threads; output does not depend on this.
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long, short, default_value = "out")]
    out: PathBuf,
}

pub fn simulate(args: SimulateArgs) -> anyhow::Result<()> {
    let config = args.model.resolve()?;
    let roster = load_roster(&config)?;
    let stats = match args.threads {
        Some(t) => monte_carlo_with_threads(&config.model, &roster, config.n_runs, config.master_seed, t)?,
        None => monte_carlo(&config.model, &roster, config.n_runs, config.master_seed)?,
    };
    let mut notes = Vec::new();
    if config.model.k == 0 {
        notes.push(format!(
            "network removed; max_simultaneous = {} (claims of a maximum of 4 here are not supported: independent entry and exit make 5 or more likely over this many years)",
            stats.max_simultaneous
        ));
    }
    if stats.graph_regenerations > 0 {
        notes.push(format!("{} disconnected graphs regenerated", stats.graph_regenerations));
    }
    let report = Report {
        schema: REPORT_SCHEMA,
        version: VERSION,
        config: &config,
        roster: &roster,
        stats: &stats,
        duration_shares: (1..=stats.duration_counts.max_value().unwrap_or(0))
            .map(|d| ShareEntry { duration: d, share: stats.duration_share(d) })
            .collect(),
        duration_fit: duration_fit(&stats.duration_counts),
        notes,
    };
    write_json(&args.out.join("report.json"), &report)?;
    write_histograms(&args.out, &stats.distributions())?;
    println!(
        "{} runs x {} steps: {} spells, all-in-recession share {:.4}, max simultaneous {}",
        stats.n_runs, config.model.n_steps, stats.total_spells, stats.frac_all_in_recession, stats.max_simultaneous
    );
    Ok(())
}

#[derive(Debug, Serialize)]
struct FactsFile<'a> {
    schema: &'static str,
    version: &'static str,
    source: &'a PathBuf,
    facts: &'a StylizedFacts,
    /// Yearly counts against the floor-discretised exponential.
    counts_rate_fit: Option<ExpRateFit>,
    /// Yearly counts against the continuous exponential.
    counts_rate_fit_continuous: Option<ExpRateFit>,
    duration_fit: Option<NlsFit>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// GDP levels CSV: `year,<country>,...`, blank cells missing.
    gdp_csv: PathBuf,
    #[arg(long, short, default_value = "out")]
    out: PathBuf,
}

fn rate_fit(sample: &[f64], reference: ExpReference) -> Option<ExpRateFit> {
    match fit_exp_rate_max_p(sample, reference) {
        Ok(fit) => Some(fit),
        Err(e) => {
            log::warn!("rate fit skipped: {e}");
            None
        }
    }
}

pub fn analyze(args: AnalyzeArgs) -> anyhow::Result<()> {
    let levels = load_gdp_csv(&args.gdp_csv)?;
    let facts = stylized_facts(&levels);
    for c in facts.coverage.iter().filter(|c| c.observed < levels.countries.len()) {
        log::info!("{}: {} of {} countries observed", c.year, c.observed, levels.countries.len());
    }
    let counts: Vec<f64> = facts
        .counts_hist
        .iter()
        .flat_map(|(v, c)| std::iter::repeat_n(f64::from(v), c as usize))
        .collect();
    let file = FactsFile {
        schema: FACTS_SCHEMA,
        version: VERSION,
        source: &args.gdp_csv,
        facts: &facts,
        counts_rate_fit: rate_fit(&counts, ExpReference::Floor),
        counts_rate_fit_continuous: rate_fit(&counts, ExpReference::Continuous),
        duration_fit: duration_fit(&facts.duration_counts),
    };
    write_json(&args.out.join("facts.json"), &file)?;
    write_histograms(&args.out, &facts.distributions())?;
    println!(
        "{} years, {} spells, aggregate recessions in {:?}",
        facts.counts_hist.total(),
        facts.total_spells,
        facts.aggregate_recession_years
    );
    Ok(())
}

#[derive(Debug, Serialize)]
struct ComparisonFile<'a> {
    schema: &'static str,
    version: &'static str,
    actual: &'a PathBuf,
    model: &'a PathBuf,
    comparison: &'a Comparison,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Observed facts (`facts.json`).
    facts_json: PathBuf,
    /// Simulation report (`report.json`).
    report_json: PathBuf,
    #[arg(long, short, default_value = "out/comparison.json")]
    out: PathBuf,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.3}"))
}

pub fn compare(args: CompareArgs) -> anyhow::Result<()> {
    let actual = load_distributions(&args.facts_json)?;
    let model = load_distributions(&args.report_json)?;
    let comparison = cascade_core::compare(&actual, &model)?;
    write_json(
        &args.out,
        &ComparisonFile {
            schema: COMPARISON_SCHEMA,
            version: VERSION,
            actual: &args.facts_json,
            model: &args.report_json,
            comparison: &comparison,
        },
    )?;
    let mut table = String::from("distribution   KS D    p      corr\n");
    for (name, part) in [
        ("counts", &comparison.counts),
        ("durations", &comparison.durations),
        ("waits", &comparison.waits),
        ("waits 1-25", &comparison.waits_1_25),
        ("waits 1-31", &comparison.waits_1_31),
    ] {
        let _ = writeln!(
            table,
            "{name:<14} {:.4}  {:.3}  {}",
            part.ks.statistic,
            part.ks.p_value,
            fmt_opt(part.correlation)
        );
    }
    let _ = writeln!(table, "duration  actual  model");
    for row in comparison.duration_shares.iter().take(10) {
        let _ = writeln!(table, "{:>8}  {:.3}   {:.3}", row.duration, row.actual, row.model);
    }
    print!("{table}");
    Ok(())
}

#[derive(Debug, Args)]
pub struct PathlenArgs {
    #[arg(long, default_value_t = 17)]
    n: usize,
    /// Neighbours per side; repeat for several curves.
    #[arg(long, default_values_t = [2usize])]
    k: Vec<usize>,
    /// Rewiring probabilities; defaults to 0, 0.05, ..., 1.
    #[arg(long)]
    mu: Vec<f64>,
    #[arg(long, default_value_t = 500)]
    realizations: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_parser = parse_rewiring, default_value = "degree-preserving-swap")]
    rewiring_mode: RewiringMode,
    /// Output directory; `apl.csv` for one k, `apl_k<k>.csv` per k otherwise.
    #[arg(long, short, default_value = "out")]
    out: PathBuf,
}

pub fn default_mu_grid() -> Vec<f64> {
    (0..=20).map(|i| f64::from(i) / 20.0).collect()
}

pub fn pathlen(args: PathlenArgs) -> anyhow::Result<()> {
    let grid = if args.mu.is_empty() { default_mu_grid() } else { args.mu.clone() };
    for &k in &args.k {
        let mut rng = seeded(args.seed);
        let rows = path_length_curve(args.n, k, &grid, args.realizations, args.rewiring_mode, &mut rng)
            .with_context(|| format!("k = {k}"))?;
        let mut csv = String::from("mu,mean_apl,realizations\n");
        for row in &rows {
            let _ = writeln!(csv, "{},{},{}", row.mu, row.mean_apl, row.realizations);
        }
        let name = if args.k.len() == 1 { "apl.csv".to_string() } else { format!("apl_k{k}.csv") };
        write_text(&args.out.join(&name), &csv)?;
        let regenerated: usize = rows.iter().map(|r| r.regenerations).sum();
        println!("k={k}: wrote {name} ({} rows, {regenerated} disconnected draws regenerated)", rows.len());
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// JSON array of parameter objects; missing keys take calibration defaults.
    #[arg(long)]
    grid: PathBuf,
    /// Facts or report JSON to score against.
    #[arg(long)]
    targets: PathBuf,
    #[arg(long)]
    roster: Option<PathBuf>,
    #[arg(long)]
    equal_sizes: bool,
    #[arg(long, default_value_t = 5000)]
    runs: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, short, default_value = "out/sweep.csv")]
    out: PathBuf,
}

fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut csv = String::from(
        "index,pi_lo,pi_hi,rho_lo,rho_hi,tau_floor,k,mu,ks_counts,ks_durations,ks_waits,corr_counts,corr_durations,corr_waits,score,error\n",
    );
    let opt = |v: Option<f64>| v.map_or_else(String::new, |v| v.to_string());
    for row in rows {
        let p = &row.params;
        let _ = write!(
            csv,
            "{},{},{},{},{},{},{},{},",
            row.index, p.pi_lo, p.pi_hi, p.rho_lo, p.rho_hi, p.tau_floor, p.k, p.mu
        );
        match &row.comparison {
            Some(c) => {
                let _ = write!(
                    csv,
                    "{},{},{},{},{},{},{},",
                    c.counts.ks.statistic,
                    c.durations.ks.statistic,
                    c.waits.ks.statistic,
                    opt(c.counts.correlation),
                    opt(c.durations.correlation),
                    opt(c.waits.correlation),
                    c.score()
                );
            }
            None => csv.push_str(",,,,,,,"),
        }
        let err = row.error.as_deref().unwrap_or("").replace(['"', ',', '\n'], " ");
        let _ = writeln!(csv, "{err}");
    }
    csv
}

pub fn sweep(args: SweepArgs) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(&args.grid).with_context(|| format!("reading {}", args.grid.display()))?;
    let grid: Vec<ModelParams> =
        serde_json::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", args.grid.display())))?;
    let targets = load_distributions(&args.targets)?;
    let n = grid.first().map_or(17, |p| p.n_countries);
    let config = RunConfig {
        model: ModelParams { n_countries: n, ..Default::default() },
        roster_path: args.roster.clone(),
        equal_sizes: args.equal_sizes,
        n_runs: args.runs,
        master_seed: args.seed,
    };
    let roster = load_roster(&config)?;
    let rows = cascade_core::engine::sweep(&grid, &roster, args.runs, args.seed, &targets)?;
    write_text(&args.out, &sweep_csv(&rows))?;
    let best = rows
        .iter()
        .filter_map(|r| r.comparison.as_ref().map(|c| (r.index, c.score())))
        .min_by(|a, b| a.1.total_cmp(&b.1));
    match best {
        Some((i, s)) => println!("{} grid points; best index {i} (score {s:.4})", rows.len()),
        None => println!("{} grid points; none scored", rows.len()),
    }
    Ok(())
}
