//! Small-world topology: ring lattices, rewiring, and path-length metrics.

use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::RewiringMode;
use crate::rng::derive_stream;

pub const DEFAULT_MAX_ATTEMPTS: usize = 100;

/// Undirected simple graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: BTreeSet::new(),
            adjacency: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicates
    /// and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::params("edges", format!("edge ({a},{b}) outside 0..{n}")));
            }
            if a == b {
                return Err(Error::params("edges", format!("self-loop at {a}")));
            }
            if !g.edges.insert(ordered(a, b)) {
                return Err(Error::params("edges", format!("duplicate edge ({a},{b})")));
            }
        }
        g.rebuild_adjacency();
        Ok(g)
    }

    fn from_edge_set(n: usize, edges: BTreeSet<(usize, usize)>) -> Self {
        let mut g = Graph {
            n,
            edges,
            adjacency: Vec::new(),
        };
        g.rebuild_adjacency();
        g
    }

    fn rebuild_adjacency(&mut self) {
        let mut adjacency = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        self.adjacency = adjacency;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(lo, hi)` pairs in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&ordered(a, b))
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// BFS hop distances from `source`; `None` for unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or_default();
            for &w in &self.adjacency[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.bfs_distances(0).iter().all(Option::is_some)
    }

    /// Returns `(sum of distances, number of pairs)` over unordered pairs.
    pub fn path_length_totals(&self) -> Result<(u64, u64)> {
        let mut total = 0u64;
        for s in 0..self.n {
            for (t, d) in self.bfs_distances(s).into_iter().enumerate().skip(s + 1) {
                match d {
                    Some(d) => total += d as u64,
                    None => return Err(Error::Disconnected { from: s, unreachable: t }),
                }
            }
        }
        let n = self.n as u64;
        Ok((total, n * n.saturating_sub(1) / 2))
    }

    pub fn eccentricities(&self) -> Result<Vec<usize>> {
        (0..self.n)
            .map(|s| {
                self.bfs_distances(s)
                    .into_iter()
                    .enumerate()
                    .try_fold(0, |acc, (t, d)| match d {
                        Some(d) => Ok(acc.max(d)),
                        None => Err(Error::Disconnected { from: s, unreachable: t }),
                    })
            })
            .collect()
    }
}

/// Ring of `n` vertices, each joined to the `k` nearest on either side.
pub fn ring_lattice(n: usize, k: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidLattice { n, k, reason: "need n >= 3" });
    }
    if k < 1 {
        return Err(Error::InvalidLattice { n, k, reason: "need k >= 1" });
    }
    if 2 * k >= n {
        return Err(Error::InvalidLattice { n, k, reason: "need 2k < n" });
    }
    let edges = (0..n)
        .flat_map(|i| (1..=k).map(move |j| ordered(i, (i + j) % n)))
        .collect();
    Ok(Graph::from_edge_set(n, edges))
}

/// Result of one rewiring pass.
#[derive(Debug, Clone)]
pub struct Rewired {
    pub graph: Graph,
    /// Lattice edges picked for rewiring.
    pub selected: usize,
    /// Edges actually replaced.
    pub replaced: usize,
}

/// Rewires each edge of `graph` independently with probability `mu`.
pub fn rewire<R: Rng + ?Sized>(graph: &Graph, mu: f64, rng: &mut R, mode: RewiringMode) -> Rewired {
    // Edge order is fixed by the BTreeSet, so selection is reproducible.
    let lattice: Vec<(usize, usize)> = graph.edges().collect();
    let selected: Vec<(usize, usize)> = lattice.iter().copied().filter(|_| rng.random::<f64>() < mu).collect();
    let mut edges = graph.edges.clone();
    let replaced = match mode {
        RewiringMode::DegreePreservingSwap => swap_pairs(&mut edges, selected.clone(), rng),
        RewiringMode::EndpointRewire => move_endpoints(&mut edges, graph.n, &selected, rng),
    };
    Rewired {
        graph: Graph::from_edge_set(graph.n, edges),
        selected: selected.len(),
        replaced,
    }
}

fn swap_pairs<R: Rng + ?Sized>(
    edges: &mut BTreeSet<(usize, usize)>,
    mut selected: Vec<(usize, usize)>,
    rng: &mut R,
) -> usize {
    selected.shuffle(rng);
    let mut replaced = 0;
    for pair in selected.chunks_exact(2) {
        let ((a, b), (c, d)) = (pair[0], pair[1]);
        // The two ways to reconnect four endpoints, tried in random order.
        let mut options = [[(a, d), (c, b)], [(a, c), (b, d)]];
        if rng.random::<bool>() {
            options.swap(0, 1);
        }
        for [e1, e2] in options {
            let (e1, e2) = (ordered(e1.0, e1.1), ordered(e2.0, e2.1));
            let valid = e1.0 != e1.1
                && e2.0 != e2.1
                && e1 != e2
                && !edges.contains(&e1)
                && !edges.contains(&e2);
            if valid {
                edges.remove(&pair[0]);
                edges.remove(&pair[1]);
                edges.insert(e1);
                edges.insert(e2);
                replaced += 2;
                break;
            }
        }
    }
    replaced
}

fn move_endpoints<R: Rng + ?Sized>(
    edges: &mut BTreeSet<(usize, usize)>,
    n: usize,
    selected: &[(usize, usize)],
    rng: &mut R,
) -> usize {
    let mut replaced = 0;
    for &(a, b) in selected {
        let degree_a = edges.iter().filter(|&&(x, y)| x == a || y == a).count();
        if degree_a >= n - 1 {
            continue;
        }
        let target = loop {
            let w = rng.random_range(0..n);
            if w != a && !edges.contains(&ordered(a, w)) {
                break w;
            }
        };
        edges.remove(&(a, b));
        edges.insert(ordered(a, target));
        replaced += 1;
    }
    replaced
}

/// Mean shortest-path length over all unordered vertex pairs.
pub fn average_path_length(graph: &Graph) -> Result<f64> {
    let (total, pairs) = graph.path_length_totals()?;
    if pairs == 0 {
        return Err(Error::Degenerate("average path length needs at least two vertices"));
    }
    Ok(total as f64 / pairs as f64)
}

/// A connected rewired graph and the number of draws it took.
#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Graph,
    pub attempts: usize,
}

/// Draws rewired lattices until one is connected.
pub fn generate_connected<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    mu: f64,
    mode: RewiringMode,
    rng: &mut R,
    max_attempts: usize,
) -> Result<Generated> {
    if max_attempts == 0 {
        return Err(Error::params("max_attempts", "must be at least 1"));
    }
    let lattice = ring_lattice(n, k)?;
    for attempt in 1..=max_attempts {
        let graph = rewire(&lattice, mu, rng, mode).graph;
        if graph.is_connected() {
            return Ok(Generated { graph, attempts: attempt });
        }
    }
    Err(Error::GenerationExhausted { attempts: max_attempts })
}

/// One row of the path-length-versus-rewiring table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathLengthRow {
    pub mu: f64,
    pub mean_apl: f64,
    pub realizations: usize,
    /// Disconnected draws discarded before reaching `realizations`.
    pub regenerations: usize,
}

/// Mean APL over `realizations` connected graphs for each rewiring
/// probability. Realizations run in parallel on derived streams and are
/// reduced in index order.
pub fn path_length_curve<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    mu_grid: &[f64],
    realizations: usize,
    mode: RewiringMode,
    rng: &mut R,
) -> Result<Vec<PathLengthRow>> {
    if realizations == 0 {
        return Err(Error::params("realizations", "must be at least 1"));
    }
    ring_lattice(n, k)?;
    let base_seed: u64 = rng.random();
    mu_grid
        .iter()
        .enumerate()
        .map(|(row, &mu)| {
            if !(0.0..=1.0).contains(&mu) {
                return Err(Error::params("mu", format!("{mu} is outside [0, 1]")));
            }
            let samples = (0..realizations)
                .into_par_iter()
                .map(|r| {
                    let mut stream = derive_stream(base_seed, (row * realizations + r) as u64);
                    let g = generate_connected(n, k, mu, mode, &mut stream, DEFAULT_MAX_ATTEMPTS)?;
                    Ok((average_path_length(&g.graph)?, g.attempts - 1))
                })
                .collect::<Result<Vec<_>>>()?;
            let sum: f64 = samples.iter().map(|s| s.0).sum();
            let regenerations = samples.iter().map(|s| s.1).sum();
            if regenerations > 0 {
                log::info!("mu={mu}: {regenerations} disconnected draws regenerated");
            }
            Ok(PathLengthRow {
                mu,
                mean_apl: sum / realizations as f64,
                realizations,
                regenerations,
            })
        })
        .collect()
}
