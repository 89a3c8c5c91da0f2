//! Seed derivation.
//!
//! Every stochastic stage owns a ChaCha stream keyed by a master seed and a
//! stream index, so results never depend on which worker ran which job.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generator for stream `index` under `master`.
pub fn stream(master: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

/// A 64-bit seed for job `index` under `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    stream(master, index).next_u64()
}
