//! Deterministic seed derivation.
//!
//! Every random decision in an experiment is driven by a seed derived from
//! the master seed and a textual task key, so the result of a task never
//! depends on the order in which tasks execute.
//!
//! Derivation: `seed = splitmix64(fnv1a64(key) ^ splitmix64(master))`, where
//! `key` is the UTF-8 parts joined by the unit separator `0x1f`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Human-readable description of [`derive_seed`], printed in run headers.
pub const DERIVATION: &str =
    "seed = splitmix64(fnv1a64(join(parts, 0x1f)) ^ splitmix64(master_seed)); rng = ChaCha8";

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(FNV_OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(FNV_PRIME))
}

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, parts: &[&str]) -> u64 {
    let mut key = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            key.push(0x1f);
        }
        key.extend_from_slice(p.as_bytes());
    }
    splitmix64(fnv1a64(&key) ^ splitmix64(master))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
