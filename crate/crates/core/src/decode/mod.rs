//! Decoders: straightforward lookup and candidate lists for undamaged packets,
//! best-first sequential search for damaged ones.

mod list;
mod partition;
mod sequential;
mod sorted;
mod weight;

pub use list::{
    decode_list, decode_straightforward, ListBudget, ListDecodeResult, ListStatus,
    StraightforwardResult,
};
pub use partition::{PartitionTable, DEFAULT_PARTITION_CAP};
pub use sequential::{
    decode_sequential, decode_sequential_traced, DecodeBudget, PopEvent, SeqDecodeResult,
    SeqFailure, DEFAULT_WIDTH_CAP,
};
pub use sorted::{SortedCandidateTable, SortedTableOptions, DEFAULT_SORTED_CAP};
pub use weight::{block_weight, error_vector, BlockWeights, ErrorVector};

use thiserror::Error;

use crate::bits::{BitError, BitSeq, PacketIndexSet};
use crate::channel::ChannelError;
use crate::codec::{CodecError, CodecParams, DataStream};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecodeError {
    #[error("{what} needs 2^{bits} entries, above the cap of 2^{cap}; use interleaving or a capped ordering")]
    TableCap {
        what: &'static str,
        bits: usize,
        cap: usize,
    },
    #[error("no candidate agrees with the packets at position {position}; packets damaged or parameters wrong")]
    Inconsistent { position: usize },
    #[error("{candidates} candidates agree at position {position}; straightforward decoding does not apply")]
    Ambiguous { position: usize, candidates: usize },
    #[error("decoder inputs disagree: {0}")]
    Setup(String),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Bits(#[from] BitError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// Checks that `data` was received with packet sets `which` under `params`.
fn check_setup(
    data: &DataStream,
    params: &CodecParams,
    which: &[&PacketIndexSet],
) -> Result<(), DecodeError> {
    let phases = usize::from(params.phases());
    if usize::from(data.phases()) != phases || which.len() != phases {
        return Err(DecodeError::Setup(format!(
            "params have {phases} phases, data {} and tables {}",
            data.phases(),
            which.len()
        )));
    }
    for (s, w) in which.iter().enumerate() {
        if usize::from(data.width(s)) != w.len() {
            return Err(DecodeError::Setup(format!(
                "phase {s}: data has {} packets, table {}",
                data.width(s),
                w.len()
            )));
        }
        w.check_width(params.state_width())?;
    }
    Ok(())
}

/// Walks parent links from `node` and writes the chosen blocks as message bits.
///
/// `blocks(i)` yields `(parent, x)` of node `i`; `depth` is the node's substep count.
fn trace_back(
    node: u32,
    depth: usize,
    params: &CodecParams,
    blocks: impl Fn(u32) -> (u32, u32),
) -> BitSeq {
    let phase_bits = params.phase_bits();
    let s_count = phase_bits.len();
    let mut xs = vec![0u32; depth];
    let mut cur = node;
    for slot in xs.iter_mut().rev() {
        let (parent, x) = blocks(cur);
        *slot = x;
        cur = parent;
    }
    let total: usize = (0..depth)
        .map(|t| usize::from(phase_bits[t % s_count]))
        .sum();
    let mut out = BitSeq::with_capacity(total);
    for (t, &x) in xs.iter().enumerate() {
        out.push_bits(u64::from(x), usize::from(phase_bits[t % s_count]));
    }
    out
}
