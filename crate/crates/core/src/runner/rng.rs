//! Seed derivation: one top-level 64-bit seed, per-component streams
//! obtained by hashing the component name (FNV-1a 64) into the seed and
//! whitening with SplitMix64. Identical (seed, name) pairs give identical
//! streams on every platform and thread count.

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x00000100000001b3;

pub fn fnv1a64(name: &str) -> u64 {
    let mut h = FNV_OFFSET;
    for b in name.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// 64-bit stream seed for a named component.
pub fn component_seed(master: u64, name: &str) -> u64 {
    splitmix64(master ^ fnv1a64(name))
}

/// Deterministic per-component generator.
pub fn component_rng(master: u64, name: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(component_seed(master, name))
}
