//! Seeded randomness shared by the forest and the fold planner.
//!
//! Streams are ChaCha8 seeded through `SeedableRng::seed_from_u64`. Derived
//! streams (one per tree) pass `seed ^ index` through the SplitMix64 finalizer
//! first. Index sampling goes through `u64` so that 32-bit targets (wasm) draw
//! the same numbers as 64-bit ones.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) const RNG_ID: &str = "chacha8/splitmix64";

pub(crate) type StdRng = ChaCha8Rng;

pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn seeded(seed: u64) -> StdRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn derived(seed: u64, index: u64) -> StdRng {
    seeded(splitmix64(seed ^ index))
}

/// Uniform index in `0..n`. `n` must be non-zero.
pub(crate) fn below(rng: &mut StdRng, n: usize) -> usize {
    rng.gen_range(0..n as u64) as usize
}

/// Fisher-Yates shuffle using [`below`].
pub(crate) fn shuffle<T>(rng: &mut StdRng, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = below(rng, i + 1);
        items.swap(i, j);
    }
}
