use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use super::{CodecError, EncodedPacketSet};
use crate::bits::{BitSeq, PacketIndexSet};
use crate::channel::NoiseProfile;

/// Packet address: the state bit it was read from, within one phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PacketId {
    pub phase: u8,
    pub position: u8,
}

impl PacketId {
    pub fn new(phase: u8, position: u8) -> Self {
        Self { phase, position }
    }
}

impl fmt::Display for PacketId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.phase, self.position)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReceivedPacket {
    pub bits: BitSeq,
    /// A-posteriori bit-flip probability of this packet.
    pub eps: f64,
}

/// The packets a receiver holds, each labelled with its noise level.
#[derive(Clone, Debug, PartialEq)]
pub struct ReceivedPackets {
    phases: u8,
    state_width: u8,
    steps: usize,
    packets: BTreeMap<PacketId, ReceivedPacket>,
}

impl ReceivedPackets {
    pub fn new(phases: u8, state_width: u8, steps: usize) -> Self {
        Self {
            phases,
            state_width,
            steps,
            packets: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, id: PacketId, bits: BitSeq, eps: f64) -> Result<(), CodecError> {
        if id.phase >= self.phases || id.position >= self.state_width {
            return Err(CodecError::UnknownPacket(id));
        }
        if bits.len() != self.steps {
            return Err(CodecError::PacketLength {
                id,
                expected: self.steps,
                got: bits.len(),
            });
        }
        if !(0.0..=0.5).contains(&eps) {
            return Err(CodecError::InvalidParams(format!(
                "packet {id}: eps {eps} outside [0, 0.5]"
            )));
        }
        if self.packets.contains_key(&id) {
            return Err(CodecError::DuplicatePacket(id));
        }
        self.packets.insert(id, ReceivedPacket { bits, eps });
        Ok(())
    }

    #[inline]
    pub fn phases(&self) -> u8 {
        self.phases
    }

    #[inline]
    pub fn state_width(&self) -> u8 {
        self.state_width
    }

    /// `L`.
    #[inline]
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn len(&self) -> usize {
        self.packets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.packets.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = PacketId> + '_ {
        self.packets.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (PacketId, &ReceivedPacket)> {
        self.packets.iter().map(|(&id, p)| (id, p))
    }

    pub fn get(&self, id: PacketId) -> Option<&ReceivedPacket> {
        self.packets.get(&id)
    }

    pub fn get_mut(&mut self, id: PacketId) -> Option<&mut ReceivedPacket> {
        self.packets.get_mut(&id)
    }

    /// Keeps only `keep`; every id in `keep` must be present.
    pub fn retain_ids(&self, keep: &[PacketId]) -> Result<Self, CodecError> {
        let mut out = Self::new(self.phases, self.state_width, self.steps);
        for &id in keep {
            let p = self.packets.get(&id).ok_or(CodecError::UnknownPacket(id))?;
            if out.packets.insert(id, p.clone()).is_some() {
                return Err(CodecError::DuplicatePacket(id));
            }
        }
        Ok(out)
    }

    /// Received positions of `phase`, if any.
    pub fn which(&self, phase: u8) -> Option<PacketIndexSet> {
        let positions: Vec<u8> = self
            .packets
            .range(PacketId::new(phase, 0)..=PacketId::new(phase, u8::MAX))
            .map(|(id, _)| id.position)
            .collect();
        PacketIndexSet::new(positions).ok()
    }

    /// Received positions of every phase; each phase needs at least one packet.
    pub fn layout(&self) -> Result<Vec<PacketIndexSet>, CodecError> {
        (0..self.phases)
            .map(|s| self.which(s).ok_or(CodecError::MissingPhase(s)))
            .collect()
    }

    /// Noise levels per phase, aligned with [`layout`](Self::layout).
    pub fn profiles(&self) -> Vec<NoiseProfile> {
        (0..self.phases)
            .map(|s| {
                let eps = self
                    .packets
                    .range(PacketId::new(s, 0)..=PacketId::new(s, u8::MAX))
                    .map(|(_, p)| p.eps)
                    .collect();
                NoiseProfile::new(eps).expect("eps validated on insert")
            })
            .collect()
    }

    pub fn all_undamaged(&self) -> bool {
        self.packets.values().all(|p| p.eps == 0.0)
    }

    /// Column view: `data[t]` gathers bit `k` of each packet of phase `s`, `t = k * S + s`.
    pub fn data(&self) -> Result<DataStream, CodecError> {
        let layout = self.layout()?;
        let s_count = usize::from(self.phases);
        let mut columns = vec![0u64; self.steps * s_count];
        for (id, p) in &self.packets {
            let s = usize::from(id.phase);
            let j = layout[s].rank_of(id.position).expect("position in layout");
            for (k, bit) in p.bits.iter().enumerate() {
                if bit {
                    columns[k * s_count + s] |= 1 << j;
                }
            }
        }
        Ok(DataStream {
            phases: self.phases,
            steps: self.steps,
            widths: layout.iter().map(|w| w.len() as u8).collect(),
            columns,
        })
    }
}

/// Per-substep columns of received bits, the decoders' input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataStream {
    phases: u8,
    steps: usize,
    widths: Vec<u8>,
    columns: Vec<u64>,
}

impl DataStream {
    /// Builds a stream directly from columns (substep-major).
    pub fn from_columns(
        phases: u8,
        widths: Vec<u8>,
        columns: Vec<u64>,
    ) -> Result<Self, CodecError> {
        let s = usize::from(phases);
        if s == 0 || widths.len() != s || !columns.len().is_multiple_of(s) {
            return Err(CodecError::InvalidParams(
                "columns do not split evenly into phases".into(),
            ));
        }
        Ok(Self {
            phases,
            steps: columns.len() / s,
            widths,
            columns,
        })
    }

    #[inline]
    pub fn phases(&self) -> u8 {
        self.phases
    }

    /// `L`.
    #[inline]
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// `L * S`.
    #[inline]
    pub fn substeps(&self) -> usize {
        self.columns.len()
    }

    /// `M_s`.
    #[inline]
    pub fn width(&self, phase: usize) -> u8 {
        self.widths[phase]
    }

    #[inline]
    pub fn column(&self, substep: usize) -> u64 {
        self.columns[substep]
    }

    pub fn columns(&self) -> &[u64] {
        &self.columns
    }
}

impl EncodedPacketSet {
    /// Undamaged copies of the packets named in `ids`.
    pub fn emit(&self, ids: &[PacketId]) -> Result<ReceivedPackets, CodecError> {
        let mut out = ReceivedPackets::new(self.phases(), self.state_width(), self.steps());
        for &id in ids {
            let bits = self.packet(id.phase, id.position)?;
            out.insert(id, bits, 0.0)?;
        }
        Ok(out)
    }

    /// Undamaged copies of positions `which[s]` of each phase `s`.
    pub fn emit_subset(&self, which: &[PacketIndexSet]) -> Result<ReceivedPackets, CodecError> {
        if which.len() != usize::from(self.phases()) {
            return Err(CodecError::InvalidParams(format!(
                "{} packet sets for {} phases",
                which.len(),
                self.phases()
            )));
        }
        let ids: Vec<PacketId> = which
            .iter()
            .enumerate()
            .flat_map(|(s, w)| {
                w.positions()
                    .iter()
                    .map(move |&p| PacketId::new(s as u8, p))
            })
            .collect();
        self.emit(&ids)
    }

    /// Every produced packet.
    pub fn emit_all(&self) -> ReceivedPackets {
        let all = PacketIndexSet::first(self.state_width()).expect("width >= 4");
        let which = vec![all; usize::from(self.phases())];
        self.emit_subset(&which).expect("all ids exist")
    }
}
