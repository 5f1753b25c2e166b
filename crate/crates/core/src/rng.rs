//! Deterministic seeding helpers.
//!
//! Sweeps derive one child seed per point as `root_seed + index` (wrapping),
//! so re-running any single point reproduces exactly the counts it produced
//! inside the full sweep.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

pub type SimRng = ChaCha12Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha12Rng::seed_from_u64(seed)
}

pub fn child_seed(root_seed: u64, index: u64) -> u64 {
    root_seed.wrapping_add(index)
}

pub fn child_rng(root_seed: u64, index: u64) -> SimRng {
    rng_from_seed(child_seed(root_seed, index))
}
