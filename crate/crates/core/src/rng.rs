//! Seeded, splittable random streams.
//!
//! Every randomized routine in this crate derives an independent ChaCha8
//! stream from a user seed and a structured key path (e.g. one stream per
//! score cell, per replication, per sampled pair). Streams do not share
//! state, so generation order and thread scheduling cannot change results,
//! and inserting one more system or replication leaves all other draws
//! untouched.
//!
//! Uniform values and index sampling are implemented directly on the raw
//! 64-bit output so the byte streams are pinned by this crate alone.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use alloc::vec::Vec;

// Key-path domains, so draws for different purposes never collide.
pub(crate) const DOMAIN_GENERATE: u64 = 1;
pub(crate) const DOMAIN_CORRUPT: u64 = 2;
pub(crate) const DOMAIN_TASK_SELECT: u64 = 3;
pub(crate) const DOMAIN_RANDOM_BASELINE: u64 = 4;
pub(crate) const DOMAIN_PAIR_SAMPLE: u64 = 5;
pub(crate) const DOMAIN_REPLICATION: u64 = 6;
pub(crate) const DOMAIN_SUBSET: u64 = 7;

/// SplitMix64 finalizer; a strong 64-bit mixing function.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn absorb(seed: u64, path: &[u64]) -> u64 {
    let mut h = mix(seed ^ GOLDEN);
    for &word in path {
        h = mix(h.wrapping_add(GOLDEN) ^ mix(word.wrapping_add(GOLDEN)));
    }
    h
}

/// Derives a child seed from `seed` and a key path.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    mix(absorb(seed, path))
}

/// An independent ChaCha8 stream keyed by `(seed, path)`.
pub fn keyed_rng(seed: u64, path: &[u64]) -> ChaCha8Rng {
    let h = absorb(seed, path);
    let mut key = [0u8; 32];
    for i in 0..4 {
        let word = mix(h.wrapping_add(GOLDEN.wrapping_mul(i as u64 + 1)));
        key[i * 8..(i + 1) * 8].copy_from_slice(&word.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Uniform draw on the open interval (0, 1), from the top 53 bits.
pub fn uniform_unit(rng: &mut impl RngCore) -> f64 {
    (((rng.next_u64() >> 11) as f64) + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}

/// Unbiased uniform index in `0..bound` by rejection sampling.
pub fn gen_index(rng: &mut impl RngCore, bound: usize) -> usize {
    assert!(bound > 0, "gen_index: bound must be positive");
    let bound = bound as u64;
    let zone = u64::MAX - (u64::MAX % bound);
    loop {
        let x = rng.next_u64();
        if x < zone {
            return (x % bound) as usize;
        }
    }
}

/// Fisher–Yates shuffle (unbiased).
pub fn shuffle<T>(rng: &mut impl RngCore, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = gen_index(rng, i + 1);
        items.swap(i, j);
    }
}

/// `k` distinct indices sampled uniformly from `0..n`, returned sorted.
pub fn sample_distinct(rng: &mut impl RngCore, n: usize, k: usize) -> Vec<usize> {
    assert!(k <= n, "sample_distinct: k must not exceed n");
    let mut pool: Vec<usize> = (0..n).collect();
    // Partial Fisher–Yates: the first k slots become the sample.
    for i in 0..k {
        let j = i + gen_index(rng, n - i);
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool.sort_unstable();
    pool
}
