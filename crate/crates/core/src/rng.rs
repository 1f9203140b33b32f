//! Seeded random streams.
//!
//! Every trial owns one [`RandomStream`]. ChaCha8 output is specified
//! independently of platform and `rand` version, which keeps recorded
//! campaigns replayable.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type RandomStream = ChaCha8Rng;

pub fn stream(seed: u64) -> RandomStream {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` within a campaign seeded with `base_seed`.
pub fn trial_seed(base_seed: u64, index: u64) -> u64 {
    mix64(mix64(base_seed) ^ mix64(index.wrapping_mul(0xD1B5_4A32_D192_ED03)))
}
