use serde::{Deserialize, Serialize};

use super::CodecError;
use crate::bits::{StateWord, MAX_STATE_WIDTH, MIN_STATE_WIDTH};

/// Largest per-phase block: a table has `2^N_s` entries.
pub const MAX_PHASE_BITS: u8 = 16;

/// Encoding parameters shared by the sender and every decoder.
///
/// One encoding step consumes `N` message bits and writes one bit to every
/// packet. With `S > 1` phases a step is split into `S` substeps; substep `s`
/// consumes `N_s` bits and writes the packets of phase `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodecParams {
    block_bits: u8,
    state_width: u8,
    phase_bits: Vec<u8>,
    seed: u64,
    initial_state: StateWord,
}

/// The subset of parameters every packet of one encoding must agree on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamsFingerprint {
    pub block_bits: u8,
    pub state_width: u8,
    pub phases: u8,
    pub seed: u64,
}

impl CodecParams {
    /// Single phase, seed 0, all-zero initial state.
    pub fn new(block_bits: u8, state_width: u8) -> Result<Self, CodecError> {
        if !(MIN_STATE_WIDTH..=MAX_STATE_WIDTH).contains(&state_width) {
            return Err(CodecError::InvalidParams(format!(
                "state width {state_width} outside [{MIN_STATE_WIDTH}, {MAX_STATE_WIDTH}]"
            )));
        }
        let p = Self {
            block_bits,
            state_width,
            phase_bits: vec![block_bits],
            seed: 0,
            initial_state: StateWord::zero(state_width)?,
        };
        p.validate()?;
        Ok(p)
    }

    /// `N` bits per step split over `phases` interleaved phases; allows `N` above
    /// [`MAX_PHASE_BITS`] as long as every phase stays within it.
    pub fn interleaved(block_bits: u8, state_width: u8, phases: u8) -> Result<Self, CodecError> {
        let small = block_bits.min(MAX_PHASE_BITS);
        let base = Self::new(small.max(1), state_width)?;
        Self { block_bits, ..base }.with_phases(phases)
    }

    /// Splits `N` into `phases` near-equal blocks; the first `N mod S` phases get one extra bit.
    pub fn with_phases(self, phases: u8) -> Result<Self, CodecError> {
        if phases == 0 || phases > self.block_bits {
            return Err(CodecError::InvalidParams(format!(
                "cannot split {} bits into {phases} phases",
                self.block_bits
            )));
        }
        let base = self.block_bits / phases;
        let extra = self.block_bits % phases;
        let split = (0..phases).map(|s| base + u8::from(s < extra)).collect();
        self.with_phase_bits(split)
    }

    /// Explicit per-phase block sizes; must sum to `N`.
    pub fn with_phase_bits(mut self, phase_bits: Vec<u8>) -> Result<Self, CodecError> {
        self.phase_bits = phase_bits;
        self.validate()?;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_initial_state(mut self, state: StateWord) -> Result<Self, CodecError> {
        if state.width() != self.state_width {
            return Err(CodecError::InvalidParams(format!(
                "initial state is {} bits wide, expected {}",
                state.width(),
                self.state_width
            )));
        }
        self.initial_state = state;
        Ok(self)
    }

    fn validate(&self) -> Result<(), CodecError> {
        if self.block_bits == 0 {
            return Err(CodecError::InvalidParams(
                "block size N must be >= 1".into(),
            ));
        }
        if self.phase_bits.is_empty() {
            return Err(CodecError::InvalidParams("at least one phase".into()));
        }
        if let Some(&b) = self
            .phase_bits
            .iter()
            .find(|&&b| b == 0 || b > MAX_PHASE_BITS)
        {
            return Err(CodecError::InvalidParams(format!(
                "phase block of {b} bits outside [1, {MAX_PHASE_BITS}]"
            )));
        }
        let total: u32 = self.phase_bits.iter().map(|&b| u32::from(b)).sum();
        if total != u32::from(self.block_bits) {
            return Err(CodecError::InvalidParams(format!(
                "phase blocks {:?} sum to {total}, expected N = {}",
                self.phase_bits, self.block_bits
            )));
        }
        Ok(())
    }

    /// `N`, message bits per step.
    #[inline]
    pub fn block_bits(&self) -> u8 {
        self.block_bits
    }

    #[inline]
    pub fn state_width(&self) -> u8 {
        self.state_width
    }

    /// `S`.
    #[inline]
    pub fn phases(&self) -> u8 {
        self.phase_bits.len() as u8
    }

    /// `N_s` for each phase.
    #[inline]
    pub fn phase_bits(&self) -> &[u8] {
        &self.phase_bits
    }

    #[inline]
    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn initial_state(&self) -> StateWord {
        self.initial_state
    }

    /// Bit offset of phase `s` within a step's block.
    pub fn phase_offset(&self, phase: usize) -> usize {
        self.phase_bits[..phase]
            .iter()
            .map(|&b| usize::from(b))
            .sum()
    }

    /// Number of steps `L` for a message of `message_bits` bits.
    pub fn steps_for(&self, message_bits: usize) -> Result<usize, CodecError> {
        let n = usize::from(self.block_bits);
        if !message_bits.is_multiple_of(n) {
            return Err(CodecError::MessageLength {
                bits: message_bits,
                block_bits: self.block_bits,
            });
        }
        Ok(message_bits / n)
    }

    pub fn fingerprint(&self) -> ParamsFingerprint {
        ParamsFingerprint {
            block_bits: self.block_bits,
            state_width: self.state_width,
            phases: self.phases(),
            seed: self.seed,
        }
    }
}
