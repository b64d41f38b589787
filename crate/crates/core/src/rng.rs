//! Counter-based random streams.
//!
//! Every random quantity in an experiment is drawn from a stream keyed by
//! `(seed, trial, purpose)`. Streams are independent of evaluation order, so
//! trials can run concurrently and still reproduce bit-identical results.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Derive the deterministic stream for `(seed, trial, purpose)`.
pub fn stream(seed: u64, trial: u64, purpose: &str) -> ChaCha8Rng {
    let mut state = seed
        ^ trial.wrapping_mul(0x9e37_79b9_7f4a_7c15)
        ^ fnv1a(purpose.as_bytes());
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
