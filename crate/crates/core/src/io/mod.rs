//! Packet files, epsilon manifests, message padding, and end-to-end recovery.

mod container;
mod manifest;
mod recover;

pub use container::{
    PacketFile, PacketHeader, FLAG_FINAL_STATE, FLAG_PERMUTATION, FLAG_SEED_WITHHELD, HEADER_LEN,
    MAGIC, VERSION,
};
pub use manifest::EpsilonManifest;
pub use recover::{recover, Method, Recovery, RecoveryMode, RecoveryOptions};

use thiserror::Error;

use crate::bits::{BitError, BitSeq, StateWord};
use crate::channel::ChannelError;
use crate::codec::{
    encode, CodecError, CodecParams, PacketId, ReceivedPackets, TableMode, TransitionTable,
};
use crate::decode::DecodeError;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("not a packet file (bad magic)")]
    BadMagic,
    #[error("unsupported container version {0}")]
    Version(u8),
    #[error("unknown flag bits in {0:#04x}")]
    Flags(u8),
    #[error("file truncated: need {need} bytes, got {got}")]
    Truncated { need: usize, got: usize },
    #[error("payload holds {got} bits, header says {expected}")]
    PayloadLength { expected: usize, got: usize },
    #[error("packets disagree: {0}")]
    Mismatch(String),
    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
    #[error("the seed was withheld from the packets; supply it")]
    SeedRequired,
    #[error("the table was built in permutation mode; supply the permutation subset")]
    SubsetRequired,
    #[error("no packets")]
    NoPackets,
    #[error("packets carry no final state")]
    FinalStateRequired,
    #[error("message of {0} bits is too long for the container")]
    TooLong(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Bits(#[from] BitError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

/// Message bits zero-padded to whole `N`-bit blocks, and the original length.
pub fn pad_message(bytes: &[u8], block_bits: u8) -> (BitSeq, usize) {
    let mut bits = BitSeq::from_bytes(bytes);
    let len = bits.len();
    bits.pad_to(len.div_ceil(usize::from(block_bits)) * usize::from(block_bits));
    (bits, len)
}

/// Inverse of [`pad_message`]; a short prefix keeps only its whole bytes' worth
/// plus a zero-filled partial byte.
pub fn unpad_message(bits: &BitSeq, message_bits: usize) -> Vec<u8> {
    let mut b = bits.clone();
    b.truncate(message_bits.min(b.len()));
    b.pack()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EncodeOptions {
    pub include_final_state: bool,
    pub withhold_seed: bool,
}

/// Encodes `message` and wraps packets `ids` as files.
pub fn encode_packets(
    message: &[u8],
    params: &CodecParams,
    mode: TableMode,
    ids: &[PacketId],
    options: EncodeOptions,
) -> Result<(Vec<PacketFile>, StateWord), IoError> {
    let permutation = matches!(mode, TableMode::Permutation(_));
    let table = TransitionTable::build(params, mode)?;
    let (bits, message_bits) = pad_message(message, params.block_bits());
    let enc = encode(&bits, params, &table)?;
    let steps = u32::try_from(enc.steps()).map_err(|_| IoError::TooLong(message_bits))?;
    let rx = enc.emit(ids)?;
    let files = rx
        .iter()
        .map(|(id, p)| PacketFile {
            header: PacketHeader {
                block_bits: params.block_bits(),
                state_width: params.state_width(),
                phases: params.phases(),
                phase: id.phase,
                position: id.position,
                seed: if options.withhold_seed {
                    0
                } else {
                    params.seed()
                },
                seed_withheld: options.withhold_seed,
                permutation,
                steps,
                message_bits: message_bits as u64,
                final_state: options
                    .include_final_state
                    .then(|| enc.final_state().value()),
            },
            payload: p.bits.clone(),
        })
        .collect();
    Ok((files, enc.final_state()))
}

/// Packets of one encoding, checked for agreement and ready to decode.
#[derive(Clone, Debug)]
pub struct PacketSet {
    pub header: PacketHeader,
    pub packets: ReceivedPackets,
}

impl PacketSet {
    /// Groups `(file, eps)` pairs; all headers must describe the same encoding.
    pub fn assemble(files: Vec<(PacketFile, f64)>) -> Result<Self, IoError> {
        let first = files.first().ok_or(IoError::NoPackets)?.0.header;
        let mut packets =
            ReceivedPackets::new(first.phases, first.state_width, first.steps as usize);
        for (file, eps) in files {
            let h = file.header;
            if h.encoding_key() != first.encoding_key() || h.final_state != first.final_state {
                return Err(IoError::Mismatch(format!(
                    "packet {}:{} has header {:?}, first packet {:?}",
                    h.phase, h.position, h, first
                )));
            }
            packets.insert(PacketId::new(h.phase, h.position), file.payload, eps)?;
        }
        Ok(Self {
            header: first,
            packets,
        })
    }

    pub fn message_bits(&self) -> usize {
        self.header.message_bits as usize
    }

    pub fn final_state(&self) -> Option<StateWord> {
        self.header
            .final_state
            .map(|v| StateWord::truncated(v, self.header.state_width).expect("width validated"))
    }
}
