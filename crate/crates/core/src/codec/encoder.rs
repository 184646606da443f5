use super::{CodecError, CodecParams, ParamsFingerprint, TransitionTable};
use crate::bits::{rotate_right, BitSeq, StateWord};

/// Output of [`encode`].
///
/// Packet `i` of phase `s` holds bit `i` of the post-XOR state of every
/// substep of that phase, so the set is stored as that state trace: packets
/// are materialised on demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedPacketSet {
    fingerprint: ParamsFingerprint,
    steps: usize,
    trace: Vec<u64>,
    final_state: StateWord,
}

/// Encodes `message` (length a multiple of `N`) into `W_s` packets per phase.
///
/// Each substep XORs the table entry of the current block into the state,
/// emits one bit per packet from the state, then rotates the state right by one.
pub fn encode(
    message: &BitSeq,
    params: &CodecParams,
    table: &TransitionTable,
) -> Result<EncodedPacketSet, CodecError> {
    table.check_params(params)?;
    let steps = params.steps_for(message.len())?;
    let width = params.state_width();
    let phase_bits: Vec<usize> = params
        .phase_bits()
        .iter()
        .map(|&b| usize::from(b))
        .collect();
    let mut state = params.initial_state().value();
    let mut trace = Vec::with_capacity(steps * phase_bits.len());
    let mut offset = 0;
    for _ in 0..steps {
        for (s, &bits) in phase_bits.iter().enumerate() {
            let x = message.read_bits(offset, bits) as usize;
            offset += bits;
            state ^= table.phase(s)[x];
            trace.push(state);
            state = rotate_right(state, width);
        }
    }
    Ok(EncodedPacketSet {
        fingerprint: params.fingerprint(),
        steps,
        trace,
        final_state: StateWord::new(state, width)?,
    })
}

impl EncodedPacketSet {
    /// `L`; every packet has this many bits.
    #[inline]
    pub fn steps(&self) -> usize {
        self.steps
    }

    #[inline]
    pub fn phases(&self) -> u8 {
        self.fingerprint.phases
    }

    #[inline]
    pub fn state_width(&self) -> u8 {
        self.fingerprint.state_width
    }

    #[inline]
    pub fn final_state(&self) -> StateWord {
        self.final_state
    }

    #[inline]
    pub fn fingerprint(&self) -> ParamsFingerprint {
        self.fingerprint
    }

    /// Post-XOR state of substep `t = k * S + s`, before the rotation.
    pub fn state_after_xor(&self, substep: usize) -> StateWord {
        StateWord::new(self.trace[substep], self.state_width()).expect("trace fits width")
    }

    /// Bits of packet `position` of `phase`.
    pub fn packet(&self, phase: u8, position: u8) -> Result<BitSeq, CodecError> {
        if phase >= self.phases() || position >= self.state_width() {
            return Err(CodecError::UnknownPacket(super::PacketId {
                phase,
                position,
            }));
        }
        let s = usize::from(self.phases());
        Ok(self
            .trace
            .iter()
            .skip(usize::from(phase))
            .step_by(s)
            .map(|&v| (v >> position) & 1 == 1)
            .collect())
    }
}
