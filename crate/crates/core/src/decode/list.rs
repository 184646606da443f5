use serde::{Deserialize, Serialize};

use super::{check_setup, trace_back, DecodeError, PartitionTable};
use crate::bits::{rotate_right, BitSeq, StateWord};
use crate::codec::{CodecParams, DataStream};

#[derive(Clone, Debug, PartialEq)]
pub struct StraightforwardResult {
    pub message: BitSeq,
    /// Table lookups performed; equals the number of encoding substeps.
    pub steps: usize,
}

/// One lookup per substep; fails on the first empty or multi-entry list.
pub fn decode_straightforward(
    data: &DataStream,
    params: &CodecParams,
    table: &PartitionTable,
    final_state: Option<StateWord>,
) -> Result<StraightforwardResult, DecodeError> {
    let which: Vec<_> = (0..table.phases()).map(|s| table.which(s)).collect();
    check_setup(data, params, &which)?;
    let width = params.state_width();
    let s_count = usize::from(params.phases());
    let mut state = params.initial_state().value();
    let mut message = BitSeq::with_capacity(data.steps() * usize::from(params.block_bits()));
    for t in 0..data.substeps() {
        let phase = table.phase(t % s_count);
        let z = phase.which.extract_raw(state) ^ data.column(t);
        let x = match phase.candidates(z) {
            [] => return Err(DecodeError::Inconsistent { position: t }),
            [x] => *x,
            many => {
                return Err(DecodeError::Ambiguous {
                    position: t,
                    candidates: many.len(),
                })
            }
        };
        message.push_bits(u64::from(x), usize::from(params.phase_bits()[t % s_count]));
        state = rotate_right(state ^ phase.entries[x as usize], width);
    }
    if let Some(f) = final_state {
        if f.value() != state {
            return Err(DecodeError::Inconsistent {
                position: data.substeps(),
            });
        }
    }
    Ok(StraightforwardResult {
        message,
        steps: data.substeps(),
    })
}

/// Resource limits for [`decode_list`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListBudget {
    /// Largest candidate list allowed at any position.
    pub max_list: usize,
    /// Most complete messages traced back from the final list.
    pub max_messages: usize,
}

impl Default for ListBudget {
    fn default() -> Self {
        Self {
            max_list: 1 << 20,
            max_messages: 16,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ListStatus {
    /// Reached the last position with at least one consistent candidate.
    Complete,
    /// A list outgrew [`ListBudget::max_list`].
    BudgetExhausted,
    /// No candidate survived; packets are damaged or parameters wrong.
    Inconsistent,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ListDecodeResult {
    pub status: ListStatus,
    /// Complete candidates (up to `max_messages`) when `Complete`; otherwise a
    /// single prefix ending at `reached`.
    pub messages: Vec<BitSeq>,
    /// Size of the final list, after filtering by `final_state`.
    pub survivors: usize,
    /// Total candidates considered over all positions.
    pub nodes: u64,
    /// `nodes / (L * S)`.
    pub width: f64,
    /// Positions fully processed.
    pub reached: usize,
}

impl ListDecodeResult {
    pub fn is_ambiguous(&self) -> bool {
        self.status == ListStatus::Complete && self.survivors > 1
    }
}

const ROOT: u32 = u32::MAX;

/// Keeps every prefix that agrees with all packets, one position at a time.
pub fn decode_list(
    data: &DataStream,
    params: &CodecParams,
    table: &PartitionTable,
    final_state: Option<StateWord>,
    budget: ListBudget,
) -> Result<ListDecodeResult, DecodeError> {
    let which: Vec<_> = (0..table.phases()).map(|s| table.which(s)).collect();
    check_setup(data, params, &which)?;
    let width = params.state_width();
    let s_count = usize::from(params.phases());
    let substeps = data.substeps();

    // arena of (parent, block); lists hold (state, arena index)
    let mut arena: Vec<(u32, u32)> = Vec::new();
    let mut current: Vec<(u64, u32)> = vec![(params.initial_state().value(), ROOT)];
    let mut next: Vec<(u64, u32)> = Vec::new();
    let mut nodes = 0u64;
    let finish = |status, reached: usize, list: &[(u64, u32)], arena: &[(u32, u32)], nodes| {
        let prefix = list
            .first()
            .map(|&(_, idx)| trace_back(idx, reached, params, |i| arena[i as usize]))
            .unwrap_or_default();
        ListDecodeResult {
            status,
            messages: vec![prefix],
            survivors: 0,
            nodes,
            width: nodes as f64 / substeps.max(1) as f64,
            reached,
        }
    };

    for t in 0..substeps {
        let phase = table.phase(t % s_count);
        let column = data.column(t);
        next.clear();
        for &(state, idx) in &current {
            let z = phase.which.extract_raw(state) ^ column;
            for &x in phase.candidates(z) {
                let child = rotate_right(state ^ phase.entries[x as usize], width);
                arena.push((idx, x));
                next.push((child, (arena.len() - 1) as u32));
            }
            if next.len() > budget.max_list {
                nodes += next.len() as u64;
                return Ok(finish(
                    ListStatus::BudgetExhausted,
                    t,
                    &current,
                    &arena,
                    nodes,
                ));
            }
        }
        nodes += next.len() as u64;
        if next.is_empty() {
            return Ok(finish(ListStatus::Inconsistent, t, &current, &arena, nodes));
        }
        std::mem::swap(&mut current, &mut next);
    }

    if let Some(f) = final_state {
        current.retain(|&(state, _)| state == f.value());
        if current.is_empty() {
            return Ok(finish(
                ListStatus::Inconsistent,
                substeps,
                &current,
                &arena,
                nodes,
            ));
        }
    }
    let messages = current
        .iter()
        .take(budget.max_messages)
        .map(|&(_, idx)| trace_back(idx, substeps, params, |i| arena[i as usize]))
        .collect();
    Ok(ListDecodeResult {
        status: ListStatus::Complete,
        messages,
        survivors: current.len(),
        nodes,
        width: nodes as f64 / substeps.max(1) as f64,
        reached: substeps,
    })
}
