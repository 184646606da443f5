use std::io::{Read, Write};

use super::IoError;
use crate::bits::BitSeq;
use crate::codec::{CodecParams, ParamsFingerprint};

pub const MAGIC: [u8; 4] = *b"JRC1";
pub const VERSION: u8 = 1;
/// Header bytes without the optional final state.
pub const HEADER_LEN: usize = 31;

pub const FLAG_FINAL_STATE: u8 = 1 << 0;
/// The seed field is zeroed; the decoder receives the seed out of band.
pub const FLAG_SEED_WITHHELD: u8 = 1 << 1;
/// The table was built in permutation mode; the designated subset travels out of band.
pub const FLAG_PERMUTATION: u8 = 1 << 2;
const KNOWN_FLAGS: u8 = FLAG_FINAL_STATE | FLAG_SEED_WITHHELD | FLAG_PERMUTATION;

/// Fixed-layout header of one packet file. Multi-byte fields are little-endian.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PacketHeader {
    pub block_bits: u8,
    pub state_width: u8,
    pub phases: u8,
    pub phase: u8,
    /// State bit carried by this packet.
    pub position: u8,
    /// Zero when withheld.
    pub seed: u64,
    pub seed_withheld: bool,
    pub permutation: bool,
    /// `L`: payload bits.
    pub steps: u32,
    /// Message length before zero-padding to whole blocks.
    pub message_bits: u64,
    pub final_state: Option<u64>,
}

impl PacketHeader {
    pub fn flags(&self) -> u8 {
        let mut f = 0;
        if self.final_state.is_some() {
            f |= FLAG_FINAL_STATE;
        }
        if self.seed_withheld {
            f |= FLAG_SEED_WITHHELD;
        }
        if self.permutation {
            f |= FLAG_PERMUTATION;
        }
        f
    }

    pub fn encoded_len(&self) -> usize {
        HEADER_LEN + if self.final_state.is_some() { 8 } else { 0 }
    }

    /// Fields every packet of one encoding must share.
    pub fn encoding_key(&self) -> (u8, u8, u8, u64, u32, u64, u8) {
        (
            self.block_bits,
            self.state_width,
            self.phases,
            self.seed,
            self.steps,
            self.message_bits,
            self.flags(),
        )
    }

    pub fn fingerprint(&self) -> ParamsFingerprint {
        ParamsFingerprint {
            block_bits: self.block_bits,
            state_width: self.state_width,
            phases: self.phases,
            seed: self.seed,
        }
    }

    /// Encoding parameters, with `seed` standing in for a withheld one.
    pub fn params(&self, seed: Option<u64>) -> Result<CodecParams, IoError> {
        let seed = match (self.seed_withheld, seed) {
            (_, Some(s)) => s,
            (false, None) => self.seed,
            (true, None) => return Err(IoError::SeedRequired),
        };
        Ok(
            CodecParams::interleaved(self.block_bits, self.state_width, self.phases)?
                .with_seed(seed),
        )
    }
}

/// One packet: header plus `L` payload bits, packed LSB-first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PacketFile {
    pub header: PacketHeader,
    pub payload: BitSeq,
}

impl PacketFile {
    pub fn write_to(&self, mut w: impl Write) -> Result<(), IoError> {
        w.write_all(&self.to_bytes()?)?;
        Ok(())
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, IoError> {
        let h = &self.header;
        if self.payload.len() != h.steps as usize {
            return Err(IoError::PayloadLength {
                expected: h.steps as usize,
                got: self.payload.len(),
            });
        }
        let mut out = Vec::with_capacity(h.encoded_len() + self.payload.len().div_ceil(8));
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.push(h.flags());
        out.extend_from_slice(&[h.block_bits, h.state_width, h.phases, h.phase, h.position]);
        out.extend_from_slice(&h.seed.to_le_bytes());
        out.extend_from_slice(&h.steps.to_le_bytes());
        out.extend_from_slice(&h.message_bits.to_le_bytes());
        if let Some(f) = h.final_state {
            out.extend_from_slice(&f.to_le_bytes());
        }
        out.extend_from_slice(&self.payload.pack());
        Ok(out)
    }

    pub fn read_from(mut r: impl Read) -> Result<Self, IoError> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, IoError> {
        if bytes.len() < HEADER_LEN {
            return Err(IoError::Truncated {
                need: HEADER_LEN,
                got: bytes.len(),
            });
        }
        if bytes[..4] != MAGIC {
            return Err(IoError::BadMagic);
        }
        if bytes[4] != VERSION {
            return Err(IoError::Version(bytes[4]));
        }
        let flags = bytes[5];
        if flags & !KNOWN_FLAGS != 0 {
            return Err(IoError::Flags(flags));
        }
        let le64 = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"));
        let steps = u32::from_le_bytes(bytes[19..23].try_into().expect("4 bytes"));
        let mut at = HEADER_LEN;
        let final_state = if flags & FLAG_FINAL_STATE != 0 {
            if bytes.len() < at + 8 {
                return Err(IoError::Truncated {
                    need: at + 8,
                    got: bytes.len(),
                });
            }
            at += 8;
            Some(le64(HEADER_LEN))
        } else {
            None
        };
        let header = PacketHeader {
            block_bits: bytes[6],
            state_width: bytes[7],
            phases: bytes[8],
            phase: bytes[9],
            position: bytes[10],
            seed: le64(11),
            seed_withheld: flags & FLAG_SEED_WITHHELD != 0,
            permutation: flags & FLAG_PERMUTATION != 0,
            steps,
            message_bits: le64(23),
            final_state,
        };
        if header.phase >= header.phases || header.position >= header.state_width {
            return Err(IoError::Mismatch(format!(
                "packet {}:{} outside {} phases of width {}",
                header.phase, header.position, header.phases, header.state_width
            )));
        }
        let payload_bytes = (steps as usize).div_ceil(8);
        if bytes.len() - at != payload_bytes {
            return Err(IoError::PayloadLength {
                expected: payload_bytes * 8,
                got: (bytes.len() - at) * 8,
            });
        }
        let payload = BitSeq::unpack(&bytes[at..], steps as usize)?;
        Ok(Self { header, payload })
    }
}
