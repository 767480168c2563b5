//! Counter-based random number streams.
//!
//! Every consumer of randomness owns a `NoiseStream` derived from
//! `(master seed, role words...)` so that parallel scheduling can never
//! change which variates a replica sees. Within a stream, variates are
//! addressable by counter: cell `i` always reads ChaCha words
//! `[4i, 4i+4)`, which makes sequential generation and random access
//! produce bit-identical values.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a 256-bit ChaCha key from a seed and a role path.
pub fn derive_key(seed: u64, words: &[u64]) -> [u8; 32] {
    let mut state = seed;
    let mut acc = splitmix(&mut state);
    for &w in words {
        state ^= w.wrapping_mul(GOLDEN | 1);
        acc ^= splitmix(&mut state);
    }
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        acc = splitmix(&mut state) ^ acc.rotate_left(17);
        chunk.copy_from_slice(&acc.to_le_bytes());
    }
    key
}

/// A derived substream with counter addressing.
pub struct NoiseStream {
    rng: ChaCha8Rng,
}

impl NoiseStream {
    pub fn new(seed: u64, words: &[u64]) -> Self {
        let rng = ChaCha8Rng::from_seed(derive_key(seed, words));
        NoiseStream { rng }
    }

    /// Standard normal for counter `i`, independent across counters.
    pub fn gauss_at(&mut self, i: u64) -> f64 {
        self.rng.set_word_pos(4 * i as u128);
        self.gauss_next()
    }

    /// Next standard normal in sequence (consumes one counter slot).
    #[inline]
    pub fn gauss_next(&mut self) -> f64 {
        let a = self.rng.next_u64();
        let b = self.rng.next_u64();
        gauss_from_bits(a, b)
    }

    /// Next pair of independent standard normals (one counter slot).
    #[inline]
    pub fn gauss_pair_next(&mut self) -> (f64, f64) {
        let a = self.rng.next_u64();
        let b = self.rng.next_u64();
        gauss_pair_from_bits(a, b)
    }

    /// Position the stream at counter `i` for a sequential run.
    pub fn seek(&mut self, i: u64) {
        self.rng.set_word_pos(4 * i as u128);
    }

    /// Next uniform in (0,1].
    #[inline]
    pub fn uniform_next(&mut self) -> f64 {
        let a = self.rng.next_u64();
        self.rng.next_u64();
        unit_open(a)
    }
}

#[inline]
fn unit_open(x: u64) -> f64 {
    // 53-bit mantissa; in (0, 1] so logs are safe
    ((x >> 11) + 1) as f64 * (1.0 / 9007199254740992.0)
}

/// Box-Muller with a fixed two-word budget, so variates stay addressable.
#[inline]
pub fn gauss_from_bits(a: u64, b: u64) -> f64 {
    let u1 = unit_open(a);
    let u2 = (b >> 11) as f64 * (1.0 / 9007199254740992.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Both Box-Muller branches from the same two words.
#[inline]
pub fn gauss_pair_from_bits(a: u64, b: u64) -> (f64, f64) {
    let u1 = unit_open(a);
    let u2 = (b >> 11) as f64 * (1.0 / 9007199254740992.0);
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
    (r * c, r * s)
}
