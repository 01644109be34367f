//! The observed-data path (levels CSV -> growth -> indicators) and the
//! simulated path (trajectory -> panel) must yield the same statistics for
//! the same recession pattern, and both must agree with a direct count.

mod common;

use cascade_core::empirics::{load_gdp_csv, panel_facts, stylized_facts, RecessionPanel};
use cascade_core::engine::trajectory_stats;
use cascade_core::{Trajectory, WorldState};
use common::{as_map, levels_csv, oracle, random_matrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn extractors_agree_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let dir = tempfile::tempdir().unwrap();
    for case in 0..1000 {
        let rows = random_matrix(&mut rng);
        let n = rows[0].len();
        let want = oracle(&rows);

        let panel = RecessionPanel::from_rows(
            (1..=rows.len() as i32).collect(),
            (0..n).map(|c| format!("C{c}")).collect(),
            &rows,
        );
        let sim = trajectory_stats(&Trajectory {
            states: rows.iter().map(|r| WorldState::from_flags(r.clone())).collect(),
            run_index: case,
            edges: Vec::new(),
            graph_attempts: 1,
        });
        assert_eq!(sim, panel_facts(&panel), "case {case}");

        let path = dir.path().join("levels.csv");
        std::fs::write(&path, levels_csv(&rows)).unwrap();
        let observed = stylized_facts(&load_gdp_csv(&path).unwrap());

        for facts in [&sim, &observed] {
            assert_eq!(as_map(&facts.counts_hist), want.counts, "case {case}");
            assert_eq!(as_map(&facts.duration_counts), want.durations, "case {case}");
            assert_eq!(as_map(&facts.wait_counts), want.waits, "case {case}");
            assert_eq!(facts.total_spells, want.durations.values().sum::<u64>(), "case {case}");
        }
    }
}

#[test]
fn spell_years_add_up() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let rows = random_matrix(&mut rng);
        let ones: u64 = rows.iter().flatten().filter(|&&x| x).count() as u64;
        let panel = RecessionPanel::from_rows((0..rows.len() as i32).collect(), vec!["x".into(); rows[0].len()], &rows);
        let f = panel_facts(&panel);
        let by_duration: u64 = f.duration_counts.iter().map(|(d, c)| u64::from(d) * c).sum();
        let by_year: u64 = f.counts_hist.iter().map(|(k, c)| u64::from(k) * c).sum();
        assert_eq!(by_duration, ones);
        assert_eq!(by_year, ones);
    }
}
