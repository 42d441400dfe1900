//! Counter-keyed random substreams.
//!
//! Every random draw in the crate comes from a ChaCha8 stream whose 256-bit key
//! is the tuple `(seed, k0, k1, k2)` written verbatim, so distinct tuples give
//! distinct streams and a stream never depends on the order in which other
//! streams were consumed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// Opens the substream keyed by `(seed, path)`.
pub fn substream(seed: u64, path: [u64; 3]) -> Stream {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    for (chunk, word) in key[8..].chunks_exact_mut(8).zip(path) {
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Folds a key path into a single 64-bit seed (SplitMix64 finalizer chain).
///
/// Used where a seed has to be stored or printed, e.g. the per-sample seeds
/// of an experiment.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    let mut h = mix64(seed ^ 0x9E37_79B9_7F4A_7C15);
    for &p in path {
        h = mix64(h.wrapping_add(0x9E37_79B9_7F4A_7C15) ^ mix64(p));
    }
    h
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform draw on [0, 1) with 53 random bits.
#[inline]
pub fn unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Exponential waiting time with the given rate (> 0).
#[inline]
pub fn exponential<R: Rng + ?Sized>(rng: &mut R, rate: f64) -> f64 {
    // 1 - u lies in (0, 1], so the log is finite
    -libm::log(1.0 - unit(rng)) / rate
}
