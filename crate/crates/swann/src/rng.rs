//! Seed derivation and per-unit random streams.
//!
//! Every random quantity in the crate draws from a ChaCha stream whose seed is
//! derived from a master seed plus a purpose tag, and whose stream id indexes
//! the unit of work (walk, neuron, evaluation, ...). Results therefore never
//! depend on thread scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const TAG_GRAPH: u64 = 0x01;
pub const TAG_PATTERNS: u64 = 0x02;
pub const TAG_INIT: u64 = 0x03;
pub const TAG_PROBE: u64 = 0x04;
pub const TAG_NOISE: u64 = 0x05;
pub const TAG_WALKS: u64 = 0x06;
pub const TAG_TRIAL: u64 = 0x100;
pub const TAG_CELL: u64 = 0x10000;

/// splitmix64 finalizer; full-period bijective mixer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a sub-seed from a master seed and a purpose tag.
pub fn derive_seed(master: u64, tag: u64) -> u64 {
    splitmix64(master ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// A seeded generator.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// An independent generator for work unit `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
