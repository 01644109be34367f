//! Shared helpers for the integration targets.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub struct Oracle {
    pub counts: BTreeMap<u32, u64>,
    pub durations: BTreeMap<u32, u64>,
    pub waits: BTreeMap<u32, u64>,
}

// Direct count over a year-major matrix, written independently of the
// library extractors.
pub fn oracle(rows: &[Vec<bool>]) -> Oracle {
    let n = rows[0].len();
    let mut o = Oracle { counts: BTreeMap::new(), durations: BTreeMap::new(), waits: BTreeMap::new() };
    for row in rows {
        *o.counts.entry(row.iter().filter(|&&x| x).count() as u32).or_default() += 1;
    }
    for c in 0..n {
        let mut t = 0;
        while t < rows.len() {
            if rows[t][c] {
                let start = t;
                while t < rows.len() && rows[t][c] {
                    t += 1;
                }
                *o.durations.entry((t - start) as u32).or_default() += 1;
            } else {
                t += 1;
            }
        }
        let hits: Vec<usize> = (0..rows.len()).filter(|&t| rows[t][c]).collect();
        for pair in hits.windows(2) {
            *o.waits.entry((pair[1] - pair[0]) as u32).or_default() += 1;
        }
    }
    o
}

pub fn as_map(h: &cascade_core::Histogram) -> BTreeMap<u32, u64> {
    h.iter().collect()
}

pub fn random_matrix(rng: &mut ChaCha8Rng) -> Vec<Vec<bool>> {
    let t = rng.random_range(1..=30);
    let n = rng.random_range(1..=8);
    let p: f64 = rng.random();
    (0..t).map(|_| (0..n).map(|_| rng.random_bool(p)).collect()).collect()
}

// Levels that fall exactly in the flagged years, with a leading base year.
pub fn levels_csv(rows: &[Vec<bool>]) -> String {
    let n = rows[0].len();
    let mut s = String::from("year");
    for c in 0..n {
        let _ = write!(s, ",C{c}");
    }
    let mut level = vec![100.0f64; n];
    let push = |s: &mut String, year: usize, level: &[f64]| {
        let _ = write!(s, "\n{}", 1900 + year);
        for v in level {
            let _ = write!(s, ",{v}");
        }
    };
    push(&mut s, 0, &level);
    for (t, row) in rows.iter().enumerate() {
        for (c, &r) in row.iter().enumerate() {
            level[c] *= if r { 0.97 } else { 1.02 };
        }
        push(&mut s, t + 1, &level);
    }
    s.push('\n');
    s
}
