//! Global recessions as a threshold cascade.
//!
//! Seventeen country-agents sit on a small-world network. Each year every
//! country may fall into recession on its own, may recover, and may import
//! a recession when the size-weighted share of its neighbours in recession
//! exceeds a random threshold. The crate simulates ensembles of such
//! histories and extracts the same stylized facts from simulated and
//! observed GDP panels: how many countries are in recession per year, how
//! long recessions last, and how long countries wait between them.
//!
//! Modules:
//! - [`model`]: per-step stochastic entry/recovery and the cascade.
//! - [`graph`]: ring lattices, rewiring, average path length.
//! - [`engine`]: seeded Monte Carlo ensembles, ablation, sweeps.
//! - [`empirics`]: GDP panel ingestion and stylized facts.
//! - [`stats`]: KS tests, exponential fits, Pearson correlation.
//! - [`compare`]: model-versus-data scoring.

pub mod compare;
pub mod empirics;
pub mod engine;
pub mod error;
pub mod graph;
pub mod hist;
pub mod model;
pub mod params;
pub mod rng;
pub mod stats;

pub use compare::{compare, Comparison, Distributions};
pub use empirics::StylizedFacts;
pub use engine::{monte_carlo, AggregateStats, Trajectory};
pub use error::{Error, ErrorClass, Result};
pub use graph::Graph;
pub use hist::Histogram;
pub use model::{StepDraws, WorldState};
pub use params::{CountryRoster, ModelParams, RewiringMode, ThresholdMode};
