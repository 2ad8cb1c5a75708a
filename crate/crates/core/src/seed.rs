//! Deterministic seed derivation. Every random stream in an experiment is
//! keyed by `(base_seed, repeat, stream, index)` so runs replay bit-for-bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Named random streams within one repeat.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Target = 1,
    Bootstrap = 2,
    Model = 3,
    Strategy = 4,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive(base: u64, repeat: u64, stream: Stream, index: u64) -> u64 {
    let mut h = splitmix64(base);
    for part in [repeat, stream as u64, index] {
        h = splitmix64(h ^ part);
    }
    h
}

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
