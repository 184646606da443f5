//! Bit sequences and encoder state words.
//!
//! Conventions used everywhere in this crate:
//!
//! * bit `i` of a [`StateWord`] is its `i`-th least significant bit (0-based);
//! * bit `j` of a [`Syndrome`] corresponds to the `j`-th entry of the
//!   [`PacketIndexSet`] it was extracted with;
//! * a [`BitSeq`] packs into bytes LSB-first: sequence index `8b + i` is bit `i`
//!   of byte `b`, and the last partial byte is zero padded.

use bitvec::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Narrowest supported state.
pub const MIN_STATE_WIDTH: u8 = 4;
/// Widest supported state.
pub const MAX_STATE_WIDTH: u8 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BitError {
    #[error("state width {0} outside [{MIN_STATE_WIDTH}, {MAX_STATE_WIDTH}]")]
    StateWidth(u8),
    #[error("value {value:#x} has bits set at or above width {width}")]
    ValueTooWide { value: u64, width: u8 },
    #[error("packet position {position} does not fit a {width}-bit state")]
    PositionOutOfRange { position: u8, width: u8 },
    #[error("packet index set must be non-empty")]
    EmptyIndexSet,
    #[error("packet index set must be strictly increasing, got {0:?}")]
    UnsortedIndexSet(Vec<u8>),
    #[error("declared length of {bits} bits needs {needed} bytes, payload has {available}")]
    ShortPayload {
        bits: usize,
        needed: usize,
        available: usize,
    },
}

/// Mask with the low `width` bits set.
#[inline]
pub fn width_mask(width: u8) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// Cyclic right rotation of the low `width` bits of `value`.
#[inline]
pub(crate) fn rotate_right(value: u64, width: u8) -> u64 {
    if width == 64 {
        value.rotate_right(1)
    } else {
        (value >> 1) | ((value & 1) << (width - 1))
    }
}

/// Encoder state of `width` bits; bit `i` of the state becomes bit `k` of packet `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateWord {
    value: u64,
    width: u8,
}

impl StateWord {
    pub fn new(value: u64, width: u8) -> Result<Self, BitError> {
        check_width(width)?;
        if value & !width_mask(width) != 0 {
            return Err(BitError::ValueTooWide { value, width });
        }
        Ok(Self { value, width })
    }

    /// Like [`StateWord::new`] but drops any bits above `width`.
    pub fn truncated(value: u64, width: u8) -> Result<Self, BitError> {
        check_width(width)?;
        Ok(Self {
            value: value & width_mask(width),
            width,
        })
    }

    pub fn zero(width: u8) -> Result<Self, BitError> {
        Self::new(0, width)
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn width(self) -> u8 {
        self.width
    }

    #[inline]
    pub fn bit(self, i: u8) -> bool {
        i < self.width && (self.value >> i) & 1 == 1
    }

    /// Rotates right by one: bit `i` of the result is bit `(i + 1) mod width` of `self`.
    #[inline]
    pub fn cyclic_shift_right(self) -> Self {
        Self {
            value: rotate_right(self.value, self.width),
            width: self.width,
        }
    }
}

impl std::ops::BitXor for StateWord {
    type Output = StateWord;

    fn bitxor(self, rhs: Self) -> Self {
        debug_assert_eq!(self.width, rhs.width);
        Self {
            value: self.value ^ rhs.value,
            width: self.width,
        }
    }
}

impl fmt::Debug for StateWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "StateWord({:0w$b})",
            self.value,
            w = usize::from(self.width)
        )
    }
}

fn check_width(width: u8) -> Result<(), BitError> {
    if (MIN_STATE_WIDTH..=MAX_STATE_WIDTH).contains(&width) {
        Ok(())
    } else {
        Err(BitError::StateWidth(width))
    }
}

/// Strictly increasing, non-empty list of state bit positions: the packets a
/// receiver holds from one phase.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct PacketIndexSet {
    positions: Vec<u8>,
    mask: u64,
}

impl PacketIndexSet {
    pub fn new(positions: Vec<u8>) -> Result<Self, BitError> {
        if positions.is_empty() {
            return Err(BitError::EmptyIndexSet);
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(BitError::UnsortedIndexSet(positions));
        }
        if let Some(&p) = positions.iter().find(|&&p| p >= MAX_STATE_WIDTH) {
            return Err(BitError::PositionOutOfRange {
                position: p,
                width: MAX_STATE_WIDTH,
            });
        }
        let mask = positions.iter().fold(0u64, |m, &p| m | (1u64 << p));
        Ok(Self { positions, mask })
    }

    /// Sorts and deduplicates before validating.
    pub fn from_unsorted(mut positions: Vec<u8>) -> Result<Self, BitError> {
        positions.sort_unstable();
        positions.dedup();
        Self::new(positions)
    }

    /// The first `count` positions, `{0, 1, .., count - 1}`.
    pub fn first(count: u8) -> Result<Self, BitError> {
        Self::new((0..count).collect())
    }

    /// Number of packets, `M`.
    #[inline]
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    /// Always false; kept for API symmetry with collections.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    #[inline]
    pub fn positions(&self) -> &[u8] {
        &self.positions
    }

    /// State bits selected by this set.
    #[inline]
    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn contains(&self, position: u8) -> bool {
        self.positions.binary_search(&position).is_ok()
    }

    /// Index `j` of `position` within the set, if present.
    pub fn rank_of(&self, position: u8) -> Option<usize> {
        self.positions.binary_search(&position).ok()
    }

    /// Largest position; every state this set is applied to must be wider.
    pub fn max_position(&self) -> u8 {
        *self.positions.last().expect("non-empty by construction")
    }

    /// Checks every position fits a `width`-bit state.
    pub fn check_width(&self, width: u8) -> Result<(), BitError> {
        let max = self.max_position();
        if max >= width {
            Err(BitError::PositionOutOfRange {
                position: max,
                width,
            })
        } else {
            Ok(())
        }
    }

    /// Gathers the selected bits of `value` into the low `M` bits. No range checks.
    #[inline]
    pub fn extract_raw(&self, value: u64) -> u64 {
        let mut out = 0u64;
        for (j, &p) in self.positions.iter().enumerate() {
            out |= ((value >> p) & 1) << j;
        }
        out
    }

    /// Inverse of [`extract_raw`](Self::extract_raw): scatters the low `M` bits of
    /// `syndrome` to the selected positions.
    #[inline]
    pub fn deposit_raw(&self, syndrome: u64) -> u64 {
        let mut out = 0u64;
        for (j, &p) in self.positions.iter().enumerate() {
            out |= ((syndrome >> j) & 1) << p;
        }
        out
    }
}

impl TryFrom<Vec<u8>> for PacketIndexSet {
    type Error = BitError;

    fn try_from(v: Vec<u8>) -> Result<Self, BitError> {
        Self::new(v)
    }
}

impl From<PacketIndexSet> for Vec<u8> {
    fn from(s: PacketIndexSet) -> Vec<u8> {
        s.positions
    }
}

/// `M`-bit value; bit `j` belongs to the `j`-th received packet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Syndrome {
    value: u64,
    width: u8,
}

impl Syndrome {
    pub fn new(value: u64, width: u8) -> Self {
        debug_assert!(width <= 64);
        Self {
            value: value & width_mask(width),
            width,
        }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn width(self) -> u8 {
        self.width
    }
}

/// Bits of `state` at the positions of `which`, in ascending position order.
pub fn extract(state: StateWord, which: &PacketIndexSet) -> Result<Syndrome, BitError> {
    which.check_width(state.width())?;
    Ok(Syndrome::new(
        which.extract_raw(state.value()),
        which.len() as u8,
    ))
}

/// Owned bit sequence with LSB-first byte packing.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitSeq {
    bits: BitVec<u8, Lsb0>,
}

impl BitSeq {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            bits: BitVec::repeat(false, len),
        }
    }

    pub fn with_capacity(len: usize) -> Self {
        Self {
            bits: BitVec::with_capacity(len),
        }
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self {
            bits: iter.into_iter().collect(),
        }
    }

    /// All `8 * bytes.len()` bits of `bytes`.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        Self {
            bits: BitVec::from_slice(bytes),
        }
    }

    /// Unpacks the first `len` bits of `bytes`.
    pub fn unpack(bytes: &[u8], len: usize) -> Result<Self, BitError> {
        let needed = len.div_ceil(8);
        if bytes.len() < needed {
            return Err(BitError::ShortPayload {
                bits: len,
                needed,
                available: bytes.len(),
            });
        }
        let mut bits = BitVec::from_slice(&bytes[..needed]);
        bits.truncate(len);
        Ok(Self { bits })
    }

    /// Packs into `ceil(len / 8)` bytes, zero padding the last byte.
    pub fn pack(&self) -> Vec<u8> {
        let mut bits = self.bits.clone();
        bits.set_uninitialized(false);
        bits.into_vec()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Bit `i`; panics when `i >= len`.
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        self.bits.set(i, value);
    }

    #[inline]
    pub fn push(&mut self, value: bool) {
        self.bits.push(value);
    }

    /// Appends the low `count` bits of `value`, least significant first.
    pub fn push_bits(&mut self, value: u64, count: usize) {
        for i in 0..count {
            self.bits.push((value >> i) & 1 == 1);
        }
    }

    /// Reads `count <= 64` bits starting at `start` as an integer, first bit least significant.
    pub fn read_bits(&self, start: usize, count: usize) -> u64 {
        debug_assert!(count <= 64);
        let mut v = 0u64;
        for i in 0..count {
            if self.bits[start + i] {
                v |= 1 << i;
            }
        }
        v
    }

    pub fn flip(&mut self, i: usize) {
        let b = self.bits[i];
        self.bits.set(i, !b);
    }

    pub fn truncate(&mut self, len: usize) {
        self.bits.truncate(len);
    }

    /// Zero-extends to `len` bits (no-op if already longer).
    pub fn pad_to(&mut self, len: usize) {
        if len > self.bits.len() {
            self.bits.resize(len, false);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().by_vals()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.count_ones()
    }

    /// Number of positions where `self` and `other` differ, over the common prefix.
    pub fn hamming_distance(&self, other: &BitSeq) -> usize {
        self.iter()
            .zip(other.iter())
            .filter(|(a, b)| a != b)
            .count()
    }
}

impl fmt::Debug for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitSeq[{}](", self.len())?;
        for b in self.iter().take(64) {
            f.write_str(if b { "1" } else { "0" })?;
        }
        if self.len() > 64 {
            f.write_str("..")?;
        }
        f.write_str(")")
    }
}

impl FromIterator<bool> for BitSeq {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self::from_bools(iter)
    }
}
