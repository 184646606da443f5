use super::DecodeError;
use crate::bits::PacketIndexSet;
use crate::codec::TransitionTable;

/// Default cap on `M_s`: the table holds `2^M` list heads.
pub const DEFAULT_PARTITION_CAP: usize = 24;

/// For every syndrome `z`, the blocks `x` with `extract(f[x]) = z`.
///
/// Lists live back to back in one array, addressed by an offsets array, so a
/// phase costs `O(2^N + 2^M)` memory.
#[derive(Clone, Debug)]
pub struct PartitionTable {
    phases: Vec<PhasePartition>,
}

#[derive(Clone, Debug)]
pub(crate) struct PhasePartition {
    pub(crate) which: PacketIndexSet,
    pub(crate) entries: Vec<u64>,
    offsets: Vec<u32>,
    blocks: Vec<u32>,
}

impl PartitionTable {
    pub fn build(table: &TransitionTable, which: &[PacketIndexSet]) -> Result<Self, DecodeError> {
        Self::build_with_cap(table, which, DEFAULT_PARTITION_CAP)
    }

    pub fn build_with_cap(
        table: &TransitionTable,
        which: &[PacketIndexSet],
        cap: usize,
    ) -> Result<Self, DecodeError> {
        if which.len() != table.phases() {
            return Err(DecodeError::Setup(format!(
                "{} packet sets for a {}-phase table",
                which.len(),
                table.phases()
            )));
        }
        let phases = which
            .iter()
            .enumerate()
            .map(|(s, w)| {
                if w.len() > cap {
                    return Err(DecodeError::TableCap {
                        what: "partition table",
                        bits: w.len(),
                        cap,
                    });
                }
                w.check_width(table.state_width())?;
                Ok(PhasePartition::build(table.phase(s), w))
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { phases })
    }

    pub fn phases(&self) -> usize {
        self.phases.len()
    }

    pub fn which(&self, phase: usize) -> &PacketIndexSet {
        &self.phases[phase].which
    }

    /// Blocks consistent with syndrome `z` in `phase`.
    #[inline]
    pub fn candidates(&self, phase: usize, z: u64) -> &[u32] {
        self.phases[phase].candidates(z)
    }

    /// List sizes of `phase`, indexed by syndrome.
    pub fn list_sizes(&self, phase: usize) -> impl Iterator<Item = usize> + '_ {
        self.phases[phase]
            .offsets
            .windows(2)
            .map(|w| (w[1] - w[0]) as usize)
    }

    pub fn max_list_len(&self) -> usize {
        (0..self.phases())
            .flat_map(|s| self.list_sizes(s))
            .max()
            .unwrap_or(0)
    }

    /// Every list has at most one entry in every phase.
    pub fn is_injective(&self) -> bool {
        self.max_list_len() <= 1
    }

    pub(crate) fn phase(&self, s: usize) -> &PhasePartition {
        &self.phases[s]
    }
}

impl PhasePartition {
    fn build(entries: &[u64], which: &PacketIndexSet) -> Self {
        let heads = 1usize << which.len();
        let syndromes: Vec<u64> = entries.iter().map(|&e| which.extract_raw(e)).collect();
        let mut offsets = vec![0u32; heads + 1];
        for &z in &syndromes {
            offsets[z as usize + 1] += 1;
        }
        for i in 0..heads {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut blocks = vec![0u32; entries.len()];
        for (x, &z) in syndromes.iter().enumerate() {
            let slot = &mut fill[z as usize];
            blocks[*slot as usize] = x as u32;
            *slot += 1;
        }
        Self {
            which: which.clone(),
            entries: entries.to_vec(),
            offsets,
            blocks,
        }
    }

    #[inline]
    pub(crate) fn candidates(&self, z: u64) -> &[u32] {
        let z = z as usize;
        &self.blocks[self.offsets[z] as usize..self.offsets[z + 1] as usize]
    }
}
