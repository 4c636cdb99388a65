//! Counter-based pseudorandom stream (SplitMix64).
//!
//! Every random choice in the crate is a pure function of `(seed, counter)`,
//! so runs are reproducible across platforms, languages and thread counts.
//! Value `i` of the stream with seed `s` is `mix(s + (i + 1) * GAMMA)`,
//! which is exactly the SplitMix64 output sequence.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Value `counter` of the stream seeded by `seed`.
#[inline]
pub fn stream(seed: u64, counter: u64) -> u64 {
    mix(seed.wrapping_add(counter.wrapping_add(1).wrapping_mul(GAMMA)))
}

/// Uniform value in `[0, bound)`; `bound` must be nonzero.
#[inline]
pub fn stream_below(seed: u64, counter: u64, bound: u64) -> u64 {
    // Tiny modulo bias is irrelevant at desk scale (bound <= 2^34).
    stream(seed, counter) % bound
}

/// Bernoulli draw: true with probability `density`.
#[inline]
pub fn stream_coin(seed: u64, counter: u64, density: f64) -> bool {
    let threshold = (density * (u64::MAX as f64)) as u64;
    stream(seed, counter) <= threshold
}

/// Derived seed for sub-stream `label` (trials, grid points, set slots).
#[inline]
pub fn derive(seed: u64, label: u64) -> u64 {
    mix(seed ^ mix(label.wrapping_add(GAMMA)))
}
