use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::{check_setup, trace_back, DecodeError, SortedCandidateTable};
use crate::bits::{rotate_right, BitSeq, StateWord};
use crate::codec::{CodecParams, DataStream};

/// Default width cap: the search may pop `256` nodes per substep.
pub const DEFAULT_WIDTH_CAP: u64 = 256;

/// Cap on popped (expanded) nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeBudget {
    pub max_nodes: u64,
}

impl DecodeBudget {
    /// [`DEFAULT_WIDTH_CAP`] nodes per substep.
    pub fn default_for(substeps: usize) -> Self {
        Self::from_width(DEFAULT_WIDTH_CAP, substeps)
    }

    pub fn from_width(width: u64, substeps: usize) -> Self {
        Self {
            max_nodes: width.saturating_mul(substeps.max(1) as u64),
        }
    }

    pub fn width_cap(self, substeps: usize) -> f64 {
        self.max_nodes as f64 / substeps.max(1) as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeqFailure {
    BudgetExhausted,
    /// Every frontier node had weight `-inf`: the undamaged packets contradict each other.
    NoExpandableNode,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeqDecodeResult {
    /// The full message on success, else the prefix of the deepest node reached.
    pub message: BitSeq,
    pub success: bool,
    pub failure: Option<SeqFailure>,
    /// Nodes popped, not counting the root.
    pub nodes: u64,
    /// `nodes / (L * S)`.
    pub width: f64,
    /// Deepest substep reached.
    pub deepest: usize,
    /// Cumulative weight of the returned node.
    pub final_weight: f64,
}

/// One iteration of the search, for inspection and tests.
#[derive(Clone, Debug, PartialEq)]
pub struct PopEvent {
    pub node: u32,
    pub parent: Option<u32>,
    pub depth: usize,
    pub weight: f64,
    /// Position in the parent's candidate list.
    pub rank: usize,
    pub x: u32,
    /// Best weight left on the frontier after this pop, before new pushes.
    pub frontier_max: Option<f64>,
}

const NO_PARENT: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
struct Node {
    state: u64,
    weight: f64,
    parent: u32,
    depth: u32,
    rank: u32,
    x: u32,
}

/// Heap key: heavier first, then deeper, then older.
#[derive(Clone, Copy, Debug)]
struct Key {
    weight: f64,
    depth: u32,
    node: u32,
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .total_cmp(&other.weight)
            .then(self.depth.cmp(&other.depth))
            .then(other.node.cmp(&self.node))
    }
}

struct Search<'a> {
    data: &'a DataStream,
    table: &'a SortedCandidateTable,
    width: u8,
    phases: usize,
    nodes: Vec<Node>,
    heap: BinaryHeap<Key>,
}

impl Search<'_> {
    /// Pushes the first finite-weight candidate of `parent`'s list at rank `from` or later.
    fn push_candidate(&mut self, parent: u32, from: usize) {
        let p = self.nodes[parent as usize];
        let t = p.depth as usize;
        let phase = self.table.phase(t % self.phases);
        let z = phase.which.extract_raw(p.state) ^ self.data.column(t);
        let list = phase.list(z);
        for (rank, &x) in list.iter().enumerate().skip(from) {
            let w = phase.weights.weight(z ^ phase.syndromes[usize::from(x)]);
            if w == f64::NEG_INFINITY {
                if phase.exact {
                    // everything further down is -inf too
                    return;
                }
                continue;
            }
            let node = Node {
                state: rotate_right(p.state ^ phase.entries[usize::from(x)], self.width),
                weight: p.weight + w,
                parent,
                depth: p.depth + 1,
                rank: rank as u32,
                x: u32::from(x),
            };
            let id = self.nodes.len() as u32;
            self.nodes.push(node);
            self.heap.push(Key {
                weight: node.weight,
                depth: node.depth,
                node: id,
            });
            return;
        }
    }
}

/// Best-first (stack-algorithm) decoding of possibly damaged packets.
///
/// Every received packet contributes to the weight according to its noise
/// level as recorded in `table`. Without `final_state` the first complete path
/// popped is returned.
pub fn decode_sequential(
    data: &DataStream,
    params: &CodecParams,
    table: &SortedCandidateTable,
    budget: DecodeBudget,
    final_state: Option<StateWord>,
) -> Result<SeqDecodeResult, DecodeError> {
    run(data, params, table, budget, final_state, None)
}

/// As [`decode_sequential`], also returning every pop in order.
pub fn decode_sequential_traced(
    data: &DataStream,
    params: &CodecParams,
    table: &SortedCandidateTable,
    budget: DecodeBudget,
    final_state: Option<StateWord>,
) -> Result<(SeqDecodeResult, Vec<PopEvent>), DecodeError> {
    let mut events = Vec::new();
    let res = run(data, params, table, budget, final_state, Some(&mut events))?;
    Ok((res, events))
}

fn run(
    data: &DataStream,
    params: &CodecParams,
    table: &SortedCandidateTable,
    budget: DecodeBudget,
    final_state: Option<StateWord>,
    mut events: Option<&mut Vec<PopEvent>>,
) -> Result<SeqDecodeResult, DecodeError> {
    let which: Vec<_> = (0..table.phases()).map(|s| table.which(s)).collect();
    check_setup(data, params, &which)?;
    if let Some(f) = final_state {
        if f.width() != params.state_width() {
            return Err(DecodeError::Setup(format!(
                "final state is {} bits wide, expected {}",
                f.width(),
                params.state_width()
            )));
        }
    }
    let substeps = data.substeps();
    let mut search = Search {
        data,
        table,
        width: params.state_width(),
        phases: usize::from(params.phases()),
        nodes: Vec::new(),
        heap: BinaryHeap::new(),
    };
    search.nodes.push(Node {
        state: params.initial_state().value(),
        weight: 0.0,
        parent: NO_PARENT,
        depth: 0,
        rank: 0,
        x: 0,
    });
    search.heap.push(Key {
        weight: 0.0,
        depth: 0,
        node: 0,
    });

    let mut popped = 0u64;
    let mut deepest = 0u32;
    let result = |search: &Search, node: u32, popped: u64, failure: Option<SeqFailure>| {
        let n = search.nodes[node as usize];
        let nodes = &search.nodes;
        SeqDecodeResult {
            message: trace_back(node, n.depth as usize, params, |i| {
                (nodes[i as usize].parent, nodes[i as usize].x)
            }),
            success: failure.is_none(),
            failure,
            nodes: popped,
            width: popped as f64 / substeps.max(1) as f64,
            deepest: n.depth as usize,
            final_weight: n.weight,
        }
    };

    while let Some(key) = search.heap.pop() {
        let id = key.node;
        let node = search.nodes[id as usize];
        if node.parent != NO_PARENT {
            if popped == budget.max_nodes {
                return Ok(result(
                    &search,
                    deepest,
                    popped,
                    Some(SeqFailure::BudgetExhausted),
                ));
            }
            popped += 1;
        }
        if let Some(ev) = events.as_deref_mut() {
            ev.push(PopEvent {
                node: id,
                parent: (node.parent != NO_PARENT).then_some(node.parent),
                depth: node.depth as usize,
                weight: node.weight,
                rank: node.rank as usize,
                x: node.x,
                frontier_max: search.heap.peek().map(|k| k.weight),
            });
        }
        if node.depth > search.nodes[deepest as usize].depth {
            deepest = id;
        }
        let complete = node.depth as usize == substeps;
        if complete && final_state.is_none_or(|f| f.value() == node.state) {
            return Ok(result(&search, id, popped, None));
        }
        if node.parent != NO_PARENT {
            search.push_candidate(node.parent, node.rank as usize + 1);
        }
        if !complete {
            search.push_candidate(id, 0);
        }
    }
    Ok(result(
        &search,
        deepest,
        popped,
        Some(SeqFailure::NoExpandableNode),
    ))
}
