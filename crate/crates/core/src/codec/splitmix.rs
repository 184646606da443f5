//! Counter-based SplitMix64.
//!
//! Word number `c` of the stream keyed by `seed` is
//! `mix(seed + 0x9e3779b97f4a7c15 * (c + 1))`, where `mix` is the SplitMix64
//! output function (Steele, Lea & Flood). Table generation addresses words by
//! `(domain, phase, index)`, so every table entry is reproducible on any
//! platform without running a stream.

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// Domain for the random bits of table entries.
pub(crate) const DOMAIN_ENTRY: u64 = 0;
/// Domain for Fisher-Yates draws in permutation mode.
pub(crate) const DOMAIN_SHUFFLE: u64 = 1;

#[inline]
pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Word at `counter` of the stream keyed by `seed`.
#[inline]
pub fn word_at(seed: u64, counter: u64) -> u64 {
    mix(seed.wrapping_add(GOLDEN_GAMMA.wrapping_mul(counter.wrapping_add(1))))
}

/// Word addressed by `(domain, phase, index)`; `index < 2^32`.
#[inline]
pub(crate) fn table_word(seed: u64, domain: u64, phase: u64, index: u64) -> u64 {
    word_at(seed, (domain << 48) | (phase << 32) | index)
}

/// Uniform integer in `[0, bound)` by multiply-shift reduction.
#[inline]
pub(crate) fn below(word: u64, bound: u64) -> u64 {
    ((u128::from(word) * u128::from(bound)) >> 64) as u64
}
