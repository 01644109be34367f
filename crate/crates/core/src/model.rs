//! Agent dynamics: stochastic entry and recovery followed by a
//! size-weighted threshold cascade over the network.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::params::{CountryRoster, ModelParams};

/// Recession indicator per country.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WorldState(Vec<bool>);

impl WorldState {
    pub fn calm(n: usize) -> Self {
        WorldState(vec![false; n])
    }

    pub fn from_flags(flags: Vec<bool>) -> Self {
        WorldState(flags)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn in_recession(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn flags(&self) -> &[bool] {
        &self.0
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// True when every recession in `self` is also a recession in `other`.
    pub fn is_subset_of(&self, other: &WorldState) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| !a || b)
    }

    fn check_len(&self, context: &'static str, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(Error::DimensionMismatch {
                context,
                expected,
                found: self.len(),
            });
        }
        Ok(())
    }
}

/// Per-country rates and thresholds drawn for one step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepDraws {
    pub pi: Vec<f64>,
    pub rho: Vec<f64>,
    pub tau: Vec<f64>,
}

impl StepDraws {
    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    /// Same probabilities for every country; thresholds at 1 (never crossed).
    pub fn uniform(n: usize, pi: f64, rho: f64) -> Self {
        StepDraws {
            pi: vec![pi; n],
            rho: vec![rho; n],
            tau: vec![1.0; n],
        }
    }
}

fn uniform_in<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Independent uniform draws of entry probability, recovery probability
/// and import threshold for each country.
pub fn draw_step_rates<R: Rng + ?Sized>(params: &ModelParams, rng: &mut R) -> StepDraws {
    let n = params.n_countries;
    let mut draws = StepDraws {
        pi: Vec::with_capacity(n),
        rho: Vec::with_capacity(n),
        tau: Vec::with_capacity(n),
    };
    for _ in 0..n {
        draws.pi.push(uniform_in(rng, params.pi_lo, params.pi_hi));
        draws.rho.push(uniform_in(rng, params.rho_lo, params.rho_hi));
        draws.tau.push(draw_threshold(params, rng));
    }
    draws
}

pub(crate) fn draw_threshold<R: Rng + ?Sized>(params: &ModelParams, rng: &mut R) -> f64 {
    uniform_in(rng, params.tau_floor, 1.0)
}

/// Spontaneous transitions. A country in recession recovers with
/// probability `rho`; every country out of recession after that,
/// including one that has just recovered, enters with probability `pi`.
pub fn stochastic_phase<R: Rng + ?Sized>(state: &WorldState, draws: &StepDraws, rng: &mut R) -> Result<WorldState> {
    let n = state.len();
    for (context, len) in [("draws.pi", draws.pi.len()), ("draws.rho", draws.rho.len())] {
        if len != n {
            return Err(Error::DimensionMismatch { context, expected: n, found: len });
        }
    }
    let next = (0..n)
        .map(|i| {
            let recovered = state.in_recession(i) && rng.random::<f64>() < draws.rho[i];
            let exposed = !state.in_recession(i) || recovered;
            if exposed {
                rng.random::<f64>() < draws.pi[i]
            } else {
                true
            }
        })
        .collect();
    Ok(WorldState(next))
}

/// Size-weighted share of `i`'s neighbours currently in recession,
/// normalised over the neighbourhood. Zero for an isolated vertex.
pub fn pressure(state: &WorldState, graph: &Graph, sizes: &[f64], i: usize) -> f64 {
    let (mut hit, mut total) = (0.0, 0.0);
    for &j in graph.neighbors(i) {
        total += sizes[j];
        if state.in_recession(j) {
            hit += sizes[j];
        }
    }
    if total > 0.0 {
        hit / total
    } else {
        0.0
    }
}

fn cascade_pass(state: &WorldState, graph: &Graph, sizes: &[f64], tau: &[f64]) -> WorldState {
    let next = (0..state.len())
        .map(|i| state.in_recession(i) || pressure(state, graph, sizes, i) > tau[i])
        .collect();
    WorldState(next)
}

/// Imports recessions across the network: a country out of recession
/// enters when the pressure from its neighbours strictly exceeds its
/// threshold. One synchronous pass, or repeated passes until nothing
/// changes when `fixed_point` is set. Never clears a recession.
pub fn cascade_phase(
    state: &WorldState,
    graph: &Graph,
    roster: &CountryRoster,
    tau: &[f64],
    fixed_point: bool,
) -> Result<WorldState> {
    let n = state.len();
    if graph.n() != n {
        return Err(Error::DimensionMismatch { context: "graph vertices", expected: n, found: graph.n() });
    }
    if roster.len() != n {
        return Err(Error::DimensionMismatch { context: "roster", expected: n, found: roster.len() });
    }
    if tau.len() != n {
        return Err(Error::DimensionMismatch { context: "thresholds", expected: n, found: tau.len() });
    }
    let mut current = cascade_pass(state, graph, roster.sizes(), tau);
    if fixed_point {
        loop {
            let next = cascade_pass(&current, graph, roster.sizes(), tau);
            if next == current {
                break;
            }
            current = next;
        }
    }
    Ok(current)
}

/// Stochastic phase then cascade phase with pre-drawn rates.
pub fn step_with_draws<R: Rng + ?Sized>(
    state: &WorldState,
    draws: &StepDraws,
    graph: &Graph,
    roster: &CountryRoster,
    params: &ModelParams,
    rng: &mut R,
) -> Result<WorldState> {
    state.check_len("state", params.n_countries)?;
    let after_shocks = stochastic_phase(state, draws, rng)?;
    cascade_phase(&after_shocks, graph, roster, &draws.tau, params.cascade_fixed_point)
}

/// One model year: draw rates, apply spontaneous transitions, then the
/// cascade. Thresholds are drawn fresh; the engine substitutes per-run
/// thresholds when configured to.
pub fn step<R: Rng + ?Sized>(
    state: &WorldState,
    graph: &Graph,
    roster: &CountryRoster,
    params: &ModelParams,
    rng: &mut R,
) -> Result<WorldState> {
    let draws = draw_step_rates(params, rng);
    step_with_draws(state, &draws, graph, roster, params, rng)
}
