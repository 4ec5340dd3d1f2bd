//! Per-index random streams.
//!
//! Every draw of `X_k` comes from the ChaCha stream selected by `(seed, k)`,
//! so a realization does not depend on the order in which indices are
//! materialized or on how work is split between threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for index `k` under run seed `seed`.
pub fn stream(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

/// Generator for the `draw`-th independent replicate of index `k`.
///
/// Used by Monte-Carlo loops that need many draws of the same `X_k`; the
/// replicate index is folded into the seed so replicates never overlap the
/// realization streams of [`stream`].
pub fn replicate_stream(seed: u64, k: u64, draw: u64) -> ChaCha8Rng {
    let mixed = splitmix64(seed ^ splitmix64(draw.wrapping_add(0xA076_1D64_78BD_642F)));
    stream(mixed, k)
}

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}
