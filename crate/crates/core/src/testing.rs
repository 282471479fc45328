//! Deterministic randomness for tests and examples.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seed used when `FRACRED_SEED` is unset or unparsable.
pub const DEFAULT_SEED: u64 = 0x5eed_f4ac;

/// Returns the seed from `FRACRED_SEED`, falling back to [`DEFAULT_SEED`].
pub fn seed() -> u64 {
    std::env::var("FRACRED_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn seeded_rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed())
}
