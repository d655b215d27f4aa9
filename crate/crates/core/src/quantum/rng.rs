//! Seeded, splittable random streams.
//!
//! Every stream is a counter-based SplitMix64 generator: the pair
//! `(seed, stream_id)` is hashed into a 64-bit key, and the `i`-th output
//! (1-based) is `mix64(key + i * GOLDEN)`. Outputs therefore depend only on
//! the pair and the draw index, so trials keyed by `stream_id` reproduce
//! bit-for-bit regardless of scheduling.
//!
//! Constants:
//! - `GOLDEN = 0x9E3779B97F4A7C15` (Weyl increment, 2^64 / phi)
//! - `mix64` is the SplitMix64 finalizer with multipliers
//!   `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB`, shifts 30/27/31.
//! - key derivation: `key = mix64(seed ^ mix64(stream_id ^ STREAM_SALT))`
//!   with `STREAM_SALT = 0xD1B54A32D192ED03`.
//! - `next_f64` takes the top 53 bits: `(x >> 11) * 2^-53`, in `[0, 1)`.
//! - `below(n)` is the high word of the 128-bit product `x * n`.

use serde::{Deserialize, Serialize};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const STREAM_SALT: u64 = 0xD1B5_4A32_D192_ED03;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// An explicit random stream, advanced by every draw.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    key: u64,
    counter: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let key = mix64(seed ^ mix64(stream_id ^ STREAM_SALT));
        Self {
            seed,
            stream_id,
            key,
            counter: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Number of 64-bit draws consumed so far.
    pub fn draws(&self) -> u64 {
        self.counter
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform in `[0, 1)` with 53 bits of resolution.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..n`. Panics if `n == 0`.
    #[inline]
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0) has no valid outcome");
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Fisher-Yates, drawing `below(i + 1)` for `i` from the top down.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}
