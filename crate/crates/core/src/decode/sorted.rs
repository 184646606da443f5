use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{BlockWeights, DecodeError};
use crate::bits::PacketIndexSet;
use crate::channel::NoiseProfile;
use crate::codec::TransitionTable;

/// Default cap on the packets used to order candidates (`2^{M_table}` lists).
pub const DEFAULT_SORTED_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SortedTableOptions {
    /// Order by the `k` least-damaged packets of each phase; `None` uses all of them.
    pub ordering_packets: Option<usize>,
    /// Largest `M_table` accepted.
    pub max_table_bits: usize,
}

impl Default for SortedTableOptions {
    fn default() -> Self {
        Self {
            ordering_packets: None,
            max_table_bits: DEFAULT_SORTED_CAP,
        }
    }
}

/// For every syndrome, all `2^{N_s}` blocks ordered by decreasing block weight.
///
/// The table also carries the full-weight function of each phase, so a
/// decoder needs nothing else: ordering may use a subset of packets, but
/// weights always use every received packet.
#[derive(Clone, Debug)]
pub struct SortedCandidateTable {
    phases: Vec<SortedPhase>,
}

#[derive(Clone, Debug)]
pub(crate) struct SortedPhase {
    pub(crate) which: PacketIndexSet,
    pub(crate) entries: Vec<u64>,
    /// `extract(f[x], which)` over all received packets.
    pub(crate) syndromes: Vec<u64>,
    pub(crate) weights: BlockWeights,
    /// Syndrome bits (ranks within `which`) used for ordering.
    order_ranks: Vec<u8>,
    pub(crate) exact: bool,
    block_bits: u8,
    lists: Vec<u16>,
}

impl SortedCandidateTable {
    pub fn build(
        table: &TransitionTable,
        which: &[PacketIndexSet],
        profiles: &[NoiseProfile],
        options: SortedTableOptions,
    ) -> Result<Self, DecodeError> {
        if which.len() != table.phases() || profiles.len() != table.phases() {
            return Err(DecodeError::Setup(format!(
                "{} packet sets and {} profiles for a {}-phase table",
                which.len(),
                profiles.len(),
                table.phases()
            )));
        }
        let phases = (0..table.phases())
            .map(|s| SortedPhase::build(table, s, &which[s], &profiles[s], options))
            .collect::<Result<_, _>>()?;
        Ok(Self { phases })
    }

    pub fn phases(&self) -> usize {
        self.phases.len()
    }

    pub fn which(&self, phase: usize) -> &PacketIndexSet {
        &self.phases[phase].which
    }

    /// Candidate blocks for the full `M`-bit syndrome `z`, best first.
    pub fn list(&self, phase: usize, z: u64) -> &[u16] {
        self.phases[phase].list(z)
    }

    /// Block weight of `x` under full syndrome `z`, using every packet.
    pub fn weight(&self, phase: usize, z: u64, x: usize) -> f64 {
        let p = &self.phases[phase];
        p.weights.weight(z ^ p.syndromes[x])
    }

    /// Whether the ordering of `phase` uses every received packet, which makes
    /// weights along each list non-increasing.
    pub fn is_exact(&self, phase: usize) -> bool {
        self.phases[phase].exact
    }

    /// Packets (by position) used to order `phase`.
    pub fn ordering_positions(&self, phase: usize) -> Vec<u8> {
        let p = &self.phases[phase];
        p.order_ranks
            .iter()
            .map(|&r| p.which.positions()[usize::from(r)])
            .collect()
    }

    pub(crate) fn phase(&self, s: usize) -> &SortedPhase {
        &self.phases[s]
    }
}

impl SortedPhase {
    fn build(
        table: &TransitionTable,
        s: usize,
        which: &PacketIndexSet,
        profile: &NoiseProfile,
        options: SortedTableOptions,
    ) -> Result<Self, DecodeError> {
        which.check_width(table.state_width())?;
        let m = which.len();
        if profile.len() != m {
            return Err(DecodeError::Setup(format!(
                "phase {s}: {m} packets but {} noise values",
                profile.len()
            )));
        }
        let k = options.ordering_packets.unwrap_or(m).min(m);
        if k > options.max_table_bits {
            return Err(DecodeError::TableCap {
                what: "sorted candidate table",
                bits: k,
                cap: options.max_table_bits,
            });
        }
        let block_bits = table.phase_bits(s);
        let entries = table.phase(s).to_vec();
        let syndromes: Vec<u64> = entries.iter().map(|&e| which.extract_raw(e)).collect();

        // least damaged first; ties keep index order
        let eps = profile.values();
        let mut ranks: Vec<u8> = (0..m as u8).collect();
        ranks.sort_by(|&a, &b| eps[usize::from(a)].total_cmp(&eps[usize::from(b)]));
        ranks.truncate(k);
        ranks.sort_unstable();
        let exact = k == m;

        let sub_profile = NoiseProfile::new(ranks.iter().map(|&r| eps[usize::from(r)]).collect())
            .expect("validated");
        let order_weights = BlockWeights::new(&sub_profile, block_bits);
        let order_syn: Vec<u64> = syndromes.iter().map(|&z| gather(z, &ranks)).collect();

        let size = entries.len();
        let mut lists = vec![0u16; size << k];
        lists.par_chunks_mut(size).enumerate().for_each(|(z, out)| {
            let w: Vec<f64> = order_syn
                .iter()
                .map(|&sx| order_weights.weight(z as u64 ^ sx))
                .collect();
            let mut xs: Vec<u16> = (0..size as u32).map(|x| x as u16).collect();
            xs.sort_by(|&a, &b| {
                w[usize::from(b)]
                    .total_cmp(&w[usize::from(a)])
                    .then(a.cmp(&b))
            });
            out.copy_from_slice(&xs);
        });

        Ok(Self {
            which: which.clone(),
            entries,
            syndromes,
            weights: BlockWeights::new(profile, block_bits),
            order_ranks: ranks,
            exact,
            block_bits,
            lists,
        })
    }

    #[inline]
    pub(crate) fn list(&self, z: u64) -> &[u16] {
        let zo = if self.exact {
            z
        } else {
            gather(z, &self.order_ranks)
        };
        let size = 1usize << self.block_bits;
        let start = zo as usize * size;
        &self.lists[start..start + size]
    }
}

/// Packs the bits of `z` at `ranks` (ascending) into the low bits.
#[inline]
fn gather(z: u64, ranks: &[u8]) -> u64 {
    ranks
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &r)| acc | ((z >> r) & 1) << j)
}
