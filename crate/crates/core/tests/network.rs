use cascade_core::graph::{average_path_length, generate_connected, ring_lattice, DEFAULT_MAX_ATTEMPTS};
use cascade_core::{Graph, RewiringMode};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lattice_params() -> impl Strategy<Value = (usize, usize)> {
    (3usize..40).prop_flat_map(|n| (Just(n), 1..=(n - 1) / 2))
}

fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    Graph::from_edges(g.n(), g.edges().map(|(a, b)| (perm[a], perm[b]))).unwrap()
}

proptest! {
    #[test]
    fn lattice_is_vertex_transitive((n, k) in lattice_params()) {
        let g = ring_lattice(n, k).unwrap();
        let ecc = g.eccentricities().unwrap();
        let sum0: usize = g.bfs_distances(0).into_iter().map(Option::unwrap).sum();
        for v in 0..n {
            prop_assert_eq!(g.degree(v), 2 * k);
            prop_assert_eq!(ecc[v], ecc[0]);
            let sum: usize = g.bfs_distances(v).into_iter().map(Option::unwrap).sum();
            prop_assert_eq!(sum, sum0);
        }
    }

    #[test]
    fn apl_invariant_under_relabeling(
        (n, k) in lattice_params(),
        mu in 0.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = generate_connected(n, k, mu, RewiringMode::DegreePreservingSwap, &mut rng, DEFAULT_MAX_ATTEMPTS)
            .unwrap()
            .graph;
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let h = relabel(&g, &perm);
        prop_assert_eq!(h.edge_count(), g.edge_count());
        prop_assert_eq!(average_path_length(&h).unwrap(), average_path_length(&g).unwrap());
    }

    #[test]
    fn lattice_apl_non_increasing_in_k((n, k) in lattice_params()) {
        prop_assume!(2 * (k + 1) < n);
        let a = average_path_length(&ring_lattice(n, k).unwrap()).unwrap();
        let b = average_path_length(&ring_lattice(n, k + 1).unwrap()).unwrap();
        prop_assert!(b <= a);
    }

    #[test]
    fn apl_between_one_and_path_bound(
        (n, k) in lattice_params(),
        mu in 0.0f64..=1.0,
        seed in any::<u64>(),
        endpoint in any::<bool>(),
    ) {
        let mode = if endpoint { RewiringMode::EndpointRewire } else { RewiringMode::DegreePreservingSwap };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = match generate_connected(n, k, mu, mode, &mut rng, DEFAULT_MAX_ATTEMPTS) {
            Ok(g) => g.graph,
            Err(_) => return Ok(()),
        };
        prop_assert_eq!(g.edge_count(), n * k);
        let apl = average_path_length(&g).unwrap();
        prop_assert!(apl >= 1.0);
        prop_assert!(apl <= (n as f64 + 1.0) / 3.0 + 1e-12);
        if !endpoint {
            prop_assert!(g.degrees().iter().all(|&d| d == 2 * k));
        }
    }
}

#[test]
fn complete_lattice_has_unit_apl() {
    assert_eq!(average_path_length(&ring_lattice(7, 3).unwrap()).unwrap(), 1.0);
}
