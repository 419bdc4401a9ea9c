//! Named RNG substreams: one master seed fans out into independent streams
//! per algorithm component, so a change in one component's draw pattern
//! cannot perturb the others.

use rand_chacha::ChaCha12Rng;
use rand_chacha::rand_core::SeedableRng;

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325_u64;
    for b in bytes {
        hash ^= u64::from(*b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Deterministic stream keyed by `(seed, name)`.
pub fn named_stream(seed: u64, name: &str) -> ChaCha12Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&fnv1a64(name.as_bytes()).to_le_bytes());
    ChaCha12Rng::from_seed(key)
}

/// The substreams a single optimizer run draws from.
pub struct RngStreams {
    pub init: ChaCha12Rng,
    pub partition: ChaCha12Rng,
    pub model: ChaCha12Rng,
    pub de: ChaCha12Rng,
    pub mutation: ChaCha12Rng,
}

impl RngStreams {
    pub fn new(seed: u64) -> Self {
        Self {
            init: named_stream(seed, "init"),
            partition: named_stream(seed, "partition"),
            model: named_stream(seed, "model"),
            de: named_stream(seed, "de"),
            mutation: named_stream(seed, "mutation"),
        }
    }
}
