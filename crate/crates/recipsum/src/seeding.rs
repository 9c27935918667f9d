//! Deterministic seed derivation and exponent sampling.
//!
//! Every randomized input in this crate comes from SplitMix64 (the finalizer
//! of Steele, Lea & Vigna's splittable generators) so that scan outputs are
//! byte-reproducible across platforms, library versions, and thread counts.
//!
//! The generator is fixed: state advances by the golden-ratio increment and
//! each output is the 64-bit mix of the new state. Uniform draws in
//! `[1, max]` are `1 + (next_u64() mod max)`; the modulo bias is irrelevant
//! at the word sizes used here and keeps the mapping trivially portable.

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The SplitMix64 sequence for a given seed.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform in `[1, max]` by modulo mapping; `max >= 1`.
    pub fn next_in(&mut self, max: u64) -> u64 {
        debug_assert!(max >= 1);
        1 + self.next_u64() % max
    }
}

/// Fold grid coordinates into a per-cell seed: each part is mixed and folded
/// into the running state, so the derivation is order-sensitive and stable.
pub fn derive_seed(root: u64, parts: &[u64]) -> u64 {
    let mut s = root;
    for &p in parts {
        s = mix64(s.wrapping_add(GOLDEN_GAMMA) ^ mix64(p));
    }
    s
}
