//! Deterministic RNG streams for reproducible Monte Carlo suites.
//!
//! Every randomized sweep derives one independent child stream per trial from
//! a single master seed, so results do not depend on evaluation order or
//! thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// RNG for a single master seed.
pub fn master_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent child stream `index` of a master seed.
pub fn child_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1).into());
    rng
}
