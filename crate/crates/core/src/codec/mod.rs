//! Transition tables and the encoder.
//!
//! Message bits are read LSB-first: block `x` of step `k` (phase `s`) takes
//! message bits starting at `k * N + offset(s)`, the first of them being bit 0
//! of `x`.

mod encoder;
mod packets;
mod params;
pub mod splitmix;
mod table;

pub use encoder::{encode, EncodedPacketSet};
pub use packets::{DataStream, PacketId, ReceivedPacket, ReceivedPackets};
pub use params::{CodecParams, ParamsFingerprint, MAX_PHASE_BITS};
pub use table::{TableMode, TransitionTable};

use crate::bits::BitError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodecError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("message of {bits} bits is not a whole number of {block_bits}-bit blocks")]
    MessageLength { bits: usize, block_bits: u8 },
    #[error("transition table does not match parameters: {0}")]
    TableMismatch(String),
    #[error("permutation subset for phase {phase} has {got} positions, expected {expected}")]
    PermutationSubset { phase: u8, expected: u8, got: usize },
    #[error("unknown packet {0}")]
    UnknownPacket(PacketId),
    #[error("duplicate packet {0}")]
    DuplicatePacket(PacketId),
    #[error("packet {id} has {got} bits, expected {expected}")]
    PacketLength {
        id: PacketId,
        expected: usize,
        got: usize,
    },
    #[error("no packets received for phase {0}")]
    MissingPhase(u8),
    #[error(transparent)]
    Bits(#[from] BitError),
}
