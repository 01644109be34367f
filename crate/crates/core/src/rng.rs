//! Seeded random streams.
//!
//! Every run of an ensemble owns a ChaCha8 stream. The stream for run `i`
//! under master seed `s` is `ChaCha8Rng::seed_from_u64(s)` switched to
//! stream number `i`, so runs can execute in any order or in parallel and
//! still draw the same numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

pub fn derive_stream(master_seed: u64, index: u64) -> SimRng {
    let mut rng = SimRng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}
