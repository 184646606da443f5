use crate::bits::{PacketIndexSet, StateWord};
use crate::channel::NoiseProfile;
use crate::codec::TransitionTable;

/// Disagreement pattern at one step: bit `i` is set iff received packet `i`
/// (in index-set order) disagrees with the candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ErrorVector {
    bits: u64,
    width: u8,
}

impl ErrorVector {
    pub fn new(bits: u64, width: u8) -> Self {
        debug_assert!(width == 64 || bits >> width == 0);
        Self { bits, width }
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn width(self) -> u8 {
        self.width
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    pub fn count_ones(self) -> u32 {
        self.bits.count_ones()
    }
}

/// `extract(state XOR f_s[x]) XOR data_k`.
pub fn error_vector(
    state: StateWord,
    x: usize,
    data_k: u64,
    table: &TransitionTable,
    phase: usize,
    which: &PacketIndexSet,
) -> ErrorVector {
    let z = which.extract_raw(state.value() ^ table.phase(phase)[x]) ^ data_k;
    ErrorVector::new(z, which.len() as u8)
}

/// `(M - N) + sum_i lg P_{eps_i}(E_i)`: the log-likelihood gain of a block
/// over a uniformly random one. `-inf` when an undamaged packet disagrees.
pub fn block_weight(e: ErrorVector, profile: &NoiseProfile, n: u8) -> f64 {
    BlockWeights::new(profile, n).compute(e.bits())
}

/// Per-packet `lg` terms of [`block_weight`], with a full lookup table for small `M`.
#[derive(Clone, Debug)]
pub struct BlockWeights {
    offset: f64,
    lg_ok: Vec<f64>,
    lg_flip: Vec<f64>,
    lookup: Option<Vec<f64>>,
}

const LOOKUP_MAX_BITS: usize = 16;

impl BlockWeights {
    pub fn new(profile: &NoiseProfile, n: u8) -> Self {
        let eps = profile.values();
        let mut w = Self {
            offset: eps.len() as f64 - f64::from(n),
            lg_ok: eps.iter().map(|&e| (1.0 - e).log2()).collect(),
            lg_flip: eps.iter().map(|&e| e.log2()).collect(),
            lookup: None,
        };
        if eps.len() <= LOOKUP_MAX_BITS {
            w.lookup = Some((0..1u64 << eps.len()).map(|e| w.compute(e)).collect());
        }
        w
    }

    /// `M`.
    pub fn width(&self) -> usize {
        self.lg_ok.len()
    }

    /// Terms are added in packet order, starting from the offset, so the
    /// table and the direct sum agree to the last bit.
    fn compute(&self, e: u64) -> f64 {
        let mut w = self.offset;
        for i in 0..self.lg_ok.len() {
            w += if e >> i & 1 == 1 {
                self.lg_flip[i]
            } else {
                self.lg_ok[i]
            };
        }
        w
    }

    #[inline]
    pub fn weight(&self, e: u64) -> f64 {
        match &self.lookup {
            Some(t) => t[e as usize],
            None => self.compute(e),
        }
    }
}
