//! Monte Carlo ensembles of the cascade model, ablation and parameter
//! sweeps.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compare::{compare, Comparison, Distributions};
use crate::empirics::{panel_facts, RecessionPanel, StylizedFacts};
use crate::error::{Error, Result};
use crate::graph::{generate_connected, Graph, DEFAULT_MAX_ATTEMPTS};
use crate::hist::Histogram;
use crate::model::{draw_step_rates, draw_threshold, step_with_draws, WorldState};
use crate::params::{CountryRoster, ModelParams, ThresholdMode};
use crate::rng::derive_stream;

/// One simulated history.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `states[t]` is the world after step `t + 1`.
    pub states: Vec<WorldState>,
    pub run_index: u64,
    pub edges: Vec<(usize, usize)>,
    /// Graph draws needed to get a connected network.
    pub graph_attempts: usize,
}

impl Trajectory {
    pub fn n_steps(&self) -> usize {
        self.states.len()
    }

    pub fn rows(&self) -> Vec<Vec<bool>> {
        self.states.iter().map(|s| s.flags().to_vec()).collect()
    }

    /// The trajectory as a fully observed panel with years `1..=n_steps`.
    pub fn to_panel(&self) -> RecessionPanel {
        let n = self.states.first().map_or(0, WorldState::len);
        RecessionPanel::from_rows(
            (1..=self.states.len() as i32).collect(),
            (0..n).map(|i| format!("agent-{i}")).collect(),
            &self.rows(),
        )
    }
}

/// Ensemble totals over all runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateStats {
    pub counts_hist: Histogram,
    pub duration_counts: Histogram,
    pub wait_counts: Histogram,
    pub total_spells: u64,
    pub frac_all_in_recession: f64,
    pub max_simultaneous: u32,
    pub n_years: u64,
    pub n_runs: u64,
    pub n_countries: usize,
    /// Disconnected graphs discarded across the ensemble.
    pub graph_regenerations: u64,
}

impl AggregateStats {
    pub fn distributions(&self) -> Distributions {
        Distributions {
            counts_hist: self.counts_hist.clone(),
            duration_counts: self.duration_counts.clone(),
            wait_counts: self.wait_counts.clone(),
        }
    }

    /// Share of spells lasting `d` years.
    pub fn duration_share(&self, d: u32) -> f64 {
        self.duration_counts.share(d)
    }
}

#[derive(Debug, Default)]
struct Partial {
    counts: Histogram,
    durations: Histogram,
    waits: Histogram,
    runs: u64,
    regenerations: u64,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.counts.merge(&other.counts);
        self.durations.merge(&other.durations);
        self.waits.merge(&other.waits);
        self.runs += other.runs;
        self.regenerations += other.regenerations;
        self
    }
}

fn check_inputs(params: &ModelParams, roster: &CountryRoster) -> Result<()> {
    params.validate()?;
    if roster.len() != params.n_countries {
        return Err(Error::DimensionMismatch {
            context: "roster",
            expected: params.n_countries,
            found: roster.len(),
        });
    }
    Ok(())
}

/// Draws this run's network. Without lattice neighbours there is no
/// network and the cascade has nothing to act on.
fn draw_network<R: Rng + ?Sized>(params: &ModelParams, rng: &mut R) -> Result<(Graph, usize)> {
    if params.k == 0 {
        return Ok((Graph::empty(params.n_countries), 1));
    }
    let g = generate_connected(
        params.n_countries,
        params.k,
        params.mu,
        params.rewiring_mode,
        rng,
        DEFAULT_MAX_ATTEMPTS,
    )?;
    Ok((g.graph, g.attempts))
}

/// Simulates one history: a fresh connected network, a calm start, then
/// `n_steps` model steps.
pub fn simulate_run<R: Rng + ?Sized>(params: &ModelParams, roster: &CountryRoster, rng: &mut R) -> Result<Trajectory> {
    check_inputs(params, roster)?;
    let (graph, graph_attempts) = draw_network(params, rng)?;
    let run_thresholds: Option<Vec<f64>> = match params.threshold_mode {
        ThresholdMode::PerStep => None,
        ThresholdMode::PerRun => Some((0..params.n_countries).map(|_| draw_threshold(params, rng)).collect()),
    };
    let mut state = WorldState::calm(params.n_countries);
    let mut states = Vec::with_capacity(params.n_steps);
    for _ in 0..params.n_steps {
        let mut draws = draw_step_rates(params, rng);
        if let Some(tau) = &run_thresholds {
            draws.tau.clone_from(tau);
        }
        state = step_with_draws(&state, &draws, &graph, roster, params, rng)?;
        states.push(state.clone());
    }
    Ok(Trajectory {
        states,
        run_index: 0,
        edges: graph.edges().collect(),
        graph_attempts,
    })
}

/// Run `run_index` of the ensemble seeded by `master_seed`.
pub fn simulate_indexed(params: &ModelParams, roster: &CountryRoster, master_seed: u64, run_index: u64) -> Result<Trajectory> {
    let mut rng = derive_stream(master_seed, run_index);
    let mut t = simulate_run(params, roster, &mut rng)?;
    t.run_index = run_index;
    Ok(t)
}

/// Counts histogram, spells and waits of one run, computed by the same
/// extractors used on observed data.
pub fn trajectory_stats(trajectory: &Trajectory) -> StylizedFacts {
    panel_facts(&trajectory.to_panel())
}

fn run_partial(params: &ModelParams, roster: &CountryRoster, master_seed: u64, run_index: u64) -> Result<Partial> {
    let t = simulate_indexed(params, roster, master_seed, run_index)?;
    let facts = trajectory_stats(&t);
    Ok(Partial {
        counts: facts.counts_hist,
        durations: facts.duration_counts,
        waits: facts.wait_counts,
        runs: 1,
        regenerations: (t.graph_attempts - 1) as u64,
    })
}

fn finish(p: Partial, params: &ModelParams) -> AggregateStats {
    let n_years = p.counts.total();
    let all = p.counts.get(params.n_countries as u32);
    AggregateStats {
        frac_all_in_recession: if n_years == 0 { 0.0 } else { all as f64 / n_years as f64 },
        max_simultaneous: p.counts.max_value().unwrap_or(0),
        total_spells: p.durations.total(),
        counts_hist: p.counts,
        duration_counts: p.durations,
        wait_counts: p.waits,
        n_years,
        n_runs: p.runs,
        n_countries: params.n_countries,
        graph_regenerations: p.regenerations,
    }
}

/// Runs `n_runs` independent histories on the current rayon pool and sums
/// their statistics. Run `i` always uses stream `i` of `master_seed`, so
/// the result does not depend on scheduling.
pub fn monte_carlo(params: &ModelParams, roster: &CountryRoster, n_runs: u64, master_seed: u64) -> Result<AggregateStats> {
    if n_runs == 0 {
        return Err(Error::params("n_runs", "must be at least 1"));
    }
    check_inputs(params, roster)?;
    let total = (0..n_runs)
        .into_par_iter()
        .map(|i| run_partial(params, roster, master_seed, i))
        .try_reduce(Partial::default, |a, b| Ok(a.merge(b)))?;
    Ok(finish(total, params))
}

/// `monte_carlo` on a dedicated pool of `threads` workers.
pub fn monte_carlo_with_threads(
    params: &ModelParams,
    roster: &CountryRoster,
    n_runs: u64,
    master_seed: u64,
    threads: usize,
) -> Result<AggregateStats> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::params("threads", e.to_string()))?;
    pool.install(|| monte_carlo(params, roster, n_runs, master_seed))
}

/// The calibration with the network removed.
pub fn ablation_params(params: &ModelParams) -> ModelParams {
    params.ablated()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: usize,
    pub params: ModelParams,
    pub comparison: Option<Comparison>,
    pub error: Option<String>,
}

/// Runs each grid point and scores it against `targets`. A failing point
/// is recorded in its row and does not stop the sweep.
pub fn sweep(
    grid: &[ModelParams],
    roster: &CountryRoster,
    n_runs: u64,
    master_seed: u64,
    targets: &Distributions,
) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        return Err(Error::params("grid", "no grid points"));
    }
    Ok(grid
        .iter()
        .enumerate()
        .map(|(index, params)| {
            let outcome = monte_carlo(params, roster, n_runs, master_seed)
                .and_then(|stats| compare(targets, &stats.distributions()));
            match outcome {
                Ok(c) => SweepRow { index, params: params.clone(), comparison: Some(c), error: None },
                Err(e) => SweepRow { index, params: params.clone(), comparison: None, error: Some(e.to_string()) },
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn no_entry_no_recessions() {
        let params = ModelParams { pi_lo: 0.0, pi_hi: 0.0, ..Default::default() };
        let t = simulate_run(&params, &CountryRoster::synthetic(), &mut seeded(1)).unwrap();
        assert!(t.states.iter().all(|s| s.count() == 0));
        let stats = trajectory_stats(&t);
        assert_eq!(stats.counts_hist.get(0), 136);
        assert_eq!(stats.total_spells, 0);
    }

    #[test]
    fn shape_and_determinism() {
        let params = ModelParams::default();
        let roster = CountryRoster::synthetic();
        let a = simulate_indexed(&params, &roster, 42, 3).unwrap();
        let b = simulate_indexed(&params, &roster, 42, 3).unwrap();
        assert_eq!(a.n_steps(), 136);
        assert!(a.states.iter().all(|s| s.len() == 17));
        assert_eq!(a.edges.len(), 34);
        assert_eq!(a, b);
        assert_ne!(a, simulate_indexed(&params, &roster, 42, 4).unwrap());
    }

    #[test]
    fn single_spell_and_waits() {
        let mut states = vec![WorldState::calm(17); 136];
        for s in &mut states[9..12] {
            let mut f = s.flags().to_vec();
            f[5] = true;
            *s = WorldState::from_flags(f);
        }
        let t = Trajectory { states, run_index: 0, edges: vec![], graph_attempts: 1 };
        let stats = trajectory_stats(&t);
        assert_eq!(stats.duration_counts, Histogram::from_counts([(3, 1)]));
        assert_eq!(stats.wait_counts, Histogram::from_counts([(1, 2)]));
        assert_eq!(stats.counts_hist.get(1), 3);
    }

    #[test]
    fn single_run_aggregate_equals_trajectory_stats() {
        let params = ModelParams::default();
        let roster = CountryRoster::synthetic();
        let agg = monte_carlo(&params, &roster, 1, 9).unwrap();
        let facts = trajectory_stats(&simulate_indexed(&params, &roster, 9, 0).unwrap());
        assert_eq!(agg.counts_hist, facts.counts_hist);
        assert_eq!(agg.duration_counts, facts.duration_counts);
        assert_eq!(agg.wait_counts, facts.wait_counts);
        assert_eq!(agg.n_years, 136);
    }

    #[test]
    fn mass_conservation() {
        let roster = CountryRoster::synthetic();
        for params in [ModelParams::default(), ModelParams::default().ablated(), ModelParams { n_steps: 40, ..Default::default() }] {
            let agg = monte_carlo(&params, &roster, 37, 5).unwrap();
            assert_eq!(agg.counts_hist.total(), 37 * params.n_steps as u64);
            assert_eq!(agg.total_spells, agg.duration_counts.total());
        }
    }

    #[test]
    fn roster_must_match() {
        let err = monte_carlo(&ModelParams::default(), &CountryRoster::equal_sizes(5), 1, 0);
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
        assert!(monte_carlo(&ModelParams::default(), &CountryRoster::synthetic(), 0, 0).is_err());
    }

    #[test]
    fn per_step_thresholds_run() {
        let params = ModelParams { threshold_mode: ThresholdMode::PerStep, ..Default::default() };
        let agg = monte_carlo(&params, &CountryRoster::synthetic(), 20, 1).unwrap();
        assert_eq!(agg.n_years, 20 * 136);
    }

    #[test]
    fn sweep_records_failures() {
        let roster = CountryRoster::synthetic();
        let targets = monte_carlo(&ModelParams::default(), &roster, 50, 1).unwrap().distributions();
        let bad = ModelParams { k: 20, ..Default::default() };
        let rows = sweep(&[ModelParams::default(), bad], &roster, 50, 1, &targets).unwrap();
        assert!(rows[0].error.is_none());
        let c = rows[0].comparison.as_ref().unwrap();
        assert_eq!(c.counts.ks.statistic, 0.0);
        assert!(rows[1].error.as_deref().unwrap().contains("k"));
        assert!(sweep(&[], &roster, 1, 1, &targets).is_err());
    }
}
