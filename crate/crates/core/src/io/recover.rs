use std::str::FromStr;

use serde::Serialize;

use super::{unpad_message, IoError, PacketSet};
use crate::analysis::{solve_pareto_c, ParetoResult};
use crate::bits::PacketIndexSet;
use crate::channel::NoiseProfile;
use crate::codec::{PacketId, TableMode, TransitionTable};
use crate::decode::{
    decode_list, decode_sequential, decode_straightforward, DecodeBudget, DecodeError, ListBudget,
    ListStatus, PartitionTable, SeqFailure, SortedCandidateTable, SortedTableOptions,
    DEFAULT_PARTITION_CAP, DEFAULT_SORTED_CAP, DEFAULT_WIDTH_CAP,
};

/// Largest `M_table + N_s` for a sorted table built automatically (`2^22` entries, 8 MiB).
const AUTO_SORTED_ENTRY_BITS: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoveryMode {
    /// Straightforward if undamaged and unambiguous, else list if undamaged, else sequential.
    Auto,
    Straightforward,
    List,
    Sequential,
}

impl FromStr for RecoveryMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(Self::Auto),
            "straightforward" => Ok(Self::Straightforward),
            "list" => Ok(Self::List),
            "seq" | "sequential" => Ok(Self::Sequential),
            _ => Err(format!("unknown mode {s:?}: auto|straightforward|list|seq")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Straightforward,
    List,
    Sequential,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryOptions {
    pub mode: RecoveryMode,
    /// Width cap for the list and sequential decoders.
    pub budget_width: u64,
    pub require_final_state: bool,
    /// Seed for packets written with it withheld.
    pub seed: Option<u64>,
    /// Designated subset for permutation-mode tables.
    pub permutation_subset: Option<PacketIndexSet>,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        Self {
            mode: RecoveryMode::Auto,
            budget_width: DEFAULT_WIDTH_CAP,
            require_final_state: false,
            seed: None,
            permutation_subset: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Recovery {
    Decoded {
        message: Vec<u8>,
        method: Method,
        width: f64,
    },
    /// The budget ran out; `prefix` is the best partial reconstruction.
    Partial {
        prefix: Vec<u8>,
        reached_bits: usize,
        method: Method,
        width: f64,
    },
    /// The packets carry less than `N` bits per step: wait for more.
    InsufficientRate { capacity: f64, deficit: f64 },
}

/// Rebuilds the table from the packet headers and decodes with the requested method.
pub fn recover(set: &PacketSet, options: &RecoveryOptions) -> Result<Recovery, IoError> {
    let header = set.header;
    let params = header.params(options.seed)?;
    if options.require_final_state && header.final_state.is_none() {
        return Err(IoError::FinalStateRequired);
    }
    let mode = if header.permutation {
        TableMode::Permutation(
            options
                .permutation_subset
                .clone()
                .ok_or(IoError::SubsetRequired)?,
        )
    } else {
        TableMode::Random
    };
    let table = TransitionTable::build(&params, mode)?;
    let final_state = set.final_state();
    let undamaged = set.packets.all_undamaged();
    let phases = usize::from(params.phases());
    let message_bits = set.message_bits();
    let steps = set.packets.steps();

    let method = match options.mode {
        RecoveryMode::Auto if undamaged => None,
        RecoveryMode::Auto => Some(Method::Sequential),
        RecoveryMode::Straightforward => Some(Method::Straightforward),
        RecoveryMode::List => Some(Method::List),
        RecoveryMode::Sequential => Some(Method::Sequential),
    };

    if method != Some(Method::Sequential) {
        // Undamaged packets beyond the table cap add nothing the others lack;
        // keep the designated subset if present, else the lowest positions.
        let layout = set.packets.layout()?;
        let keep: Vec<PacketIndexSet> = layout
            .iter()
            .map(|which| match &options.permutation_subset {
                Some(sub) if sub.positions().iter().all(|&p| which.contains(p)) => sub.clone(),
                _ if which.len() > DEFAULT_PARTITION_CAP => {
                    PacketIndexSet::new(which.positions()[..DEFAULT_PARTITION_CAP].to_vec())
                        .expect("prefix of a valid set")
                }
                _ => which.clone(),
            })
            .collect();
        let ids: Vec<PacketId> = keep
            .iter()
            .enumerate()
            .flat_map(|(s, w)| {
                w.positions()
                    .iter()
                    .map(move |&p| PacketId::new(s as u8, p))
            })
            .collect();
        let data = set.packets.retain_ids(&ids)?.data()?;
        let pt = PartitionTable::build(&table, &keep)?;
        let straightforward = match method {
            Some(m) => m == Method::Straightforward,
            None => pt.is_injective(),
        };
        if straightforward {
            let out = decode_straightforward(&data, &params, &pt, final_state)?;
            return Ok(Recovery::Decoded {
                message: unpad_message(&out.message, message_bits),
                method: Method::Straightforward,
                width: 1.0,
            });
        }
        let budget = ListBudget {
            max_list: (options.budget_width as usize)
                .saturating_mul(1 << params.phase_bits().iter().max().copied().unwrap_or(1)),
            max_messages: 2,
        };
        let res = decode_list(&data, &params, &pt, final_state, budget)?;
        return match res.status {
            // without a final state several paths can survive to the end
            ListStatus::Complete if res.survivors > 1 => Err(DecodeError::Ambiguous {
                position: res.reached,
                candidates: res.survivors,
            }
            .into()),
            ListStatus::Complete => Ok(Recovery::Decoded {
                message: unpad_message(&res.messages[0], message_bits),
                method: Method::List,
                width: res.width,
            }),
            ListStatus::BudgetExhausted => Ok(Recovery::Partial {
                reached_bits: res.messages[0].len().min(message_bits),
                prefix: unpad_message(&res.messages[0], message_bits),
                method: Method::List,
                width: res.width,
            }),
            ListStatus::Inconsistent => Err(DecodeError::Inconsistent {
                position: res.reached,
            }
            .into()),
        };
    }

    let profiles = set.packets.profiles();
    let regime = solve_pareto_c(&NoiseProfile::concat(&profiles), params.block_bits());
    if let ParetoResult::BelowShannon { capacity, deficit } = regime {
        return Ok(Recovery::InsufficientRate { capacity, deficit });
    }
    let layout = set.packets.layout()?;
    let ordering = (0..phases)
        .map(|s| {
            let room = AUTO_SORTED_ENTRY_BITS.saturating_sub(usize::from(params.phase_bits()[s]));
            layout[s].len().min(DEFAULT_SORTED_CAP).min(room)
        })
        .min()
        .unwrap_or(0);
    let st = SortedCandidateTable::build(
        &table,
        &layout,
        &profiles,
        SortedTableOptions {
            ordering_packets: Some(ordering),
            max_table_bits: DEFAULT_SORTED_CAP,
        },
    )?;
    let data = set.packets.data()?;
    let budget = DecodeBudget::from_width(options.budget_width, steps * phases);
    let res = decode_sequential(&data, &params, &st, budget, final_state)?;
    match res.failure {
        None => Ok(Recovery::Decoded {
            message: unpad_message(&res.message, message_bits),
            method: Method::Sequential,
            width: res.width,
        }),
        Some(SeqFailure::BudgetExhausted) => Ok(Recovery::Partial {
            reached_bits: res.message.len().min(message_bits),
            prefix: unpad_message(&res.message, message_bits),
            method: Method::Sequential,
            width: res.width,
        }),
        Some(SeqFailure::NoExpandableNode) => Err(DecodeError::Inconsistent {
            position: res.deepest,
        }
        .into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{corrupt_packet, RngStream};
    use crate::codec::CodecParams;
    use crate::io::{encode_packets, EncodeOptions, PacketSet};

    fn message() -> Vec<u8> {
        (0..301u32).map(|i| (i * 37 % 251) as u8).collect()
    }

    fn opts() -> EncodeOptions {
        EncodeOptions {
            include_final_state: true,
            withhold_seed: false,
        }
    }

    fn ids(positions: &[u8]) -> Vec<PacketId> {
        positions.iter().map(|&p| PacketId::new(0, p)).collect()
    }

    #[test]
    fn permutation_group_is_straightforward() {
        let subset = PacketIndexSet::new(vec![0, 8, 16, 24, 32, 40, 48, 56]).unwrap();
        let params = CodecParams::new(8, 64).unwrap().with_seed(3);
        let all: Vec<u8> = (0..64).collect();
        let (files, _) = encode_packets(
            &message(),
            &params,
            TableMode::Permutation(subset.clone()),
            &ids(&all),
            opts(),
        )
        .unwrap();
        let set = PacketSet::assemble(files.into_iter().map(|f| (f, 0.0)).collect()).unwrap();
        let options = RecoveryOptions {
            permutation_subset: Some(subset),
            ..Default::default()
        };
        let out = recover(&set, &options).unwrap();
        assert_eq!(
            out,
            Recovery::Decoded {
                message: message(),
                method: Method::Straightforward,
                width: 1.0
            }
        );
        assert!(matches!(
            recover(&set, &RecoveryOptions::default()),
            Err(IoError::SubsetRequired)
        ));
    }

    #[test]
    fn spare_packet_uses_list() {
        let params = CodecParams::new(5, 64).unwrap().with_seed(4);
        let (files, _) = encode_packets(
            &message(),
            &params,
            TableMode::Random,
            &ids(&[1, 5, 9, 13, 17, 21]),
            opts(),
        )
        .unwrap();
        let set = PacketSet::assemble(files.into_iter().map(|f| (f, 0.0)).collect()).unwrap();
        match recover(&set, &RecoveryOptions::default()).unwrap() {
            Recovery::Decoded {
                message: m, method, ..
            } => {
                assert_eq!(m, message());
                assert_ne!(method, Method::Sequential);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn damaged_packets_use_sequential_or_refuse() {
        let params = CodecParams::new(5, 64).unwrap().with_seed(5);
        let positions = [2u8, 6, 10, 14, 30, 50];
        let (files, _) = encode_packets(
            &message(),
            &params,
            TableMode::Random,
            &ids(&positions),
            opts(),
        )
        .unwrap();
        let eps = [0.0, 0.0, 0.0, 0.0, 0.05, 0.04];
        let mut set = PacketSet::assemble(files.into_iter().zip(eps).collect()).unwrap();
        let mut rng = RngStream::new(9, 0).rng();
        for (p, e) in positions.iter().zip(eps) {
            corrupt_packet(&mut set.packets, PacketId::new(0, *p), e, &mut rng).unwrap();
        }
        match recover(&set, &RecoveryOptions::default()).unwrap() {
            Recovery::Decoded {
                message: m, method, ..
            } => {
                assert_eq!(m, message());
                assert_eq!(method, Method::Sequential);
            }
            Recovery::Partial { .. } => {}
            other => panic!("{other:?}"),
        }
        // drop a clean packet: capacity falls below N
        let keep = ids(&[2, 6, 10, 30, 50]);
        let fewer = PacketSet {
            header: set.header,
            packets: set.packets.retain_ids(&keep).unwrap(),
        };
        assert!(matches!(
            recover(&fewer, &RecoveryOptions::default()).unwrap(),
            Recovery::InsufficientRate { .. }
        ));
    }

    #[test]
    fn withheld_seed_must_be_supplied() {
        let params = CodecParams::new(4, 64).unwrap().with_seed(77);
        let o = EncodeOptions {
            include_final_state: true,
            withhold_seed: true,
        };
        let (files, _) = encode_packets(
            b"secret",
            &params,
            TableMode::Random,
            &ids(&[0, 1, 2, 3, 4]),
            o,
        )
        .unwrap();
        assert_eq!(files[0].header.seed, 0);
        let set = PacketSet::assemble(files.into_iter().map(|f| (f, 0.0)).collect()).unwrap();
        assert!(matches!(
            recover(&set, &RecoveryOptions::default()),
            Err(IoError::SeedRequired)
        ));
        let with_seed = RecoveryOptions {
            seed: Some(77),
            ..Default::default()
        };
        match recover(&set, &with_seed).unwrap() {
            Recovery::Decoded { message, .. } => assert_eq!(message, b"secret"),
            other => panic!("{other:?}"),
        }
        let bare = EncodeOptions {
            include_final_state: false,
            withhold_seed: false,
        };
        let (files, _) = encode_packets(
            b"secret",
            &params,
            TableMode::Random,
            &ids(&[0, 1, 2, 3, 4]),
            bare,
        )
        .unwrap();
        let set = PacketSet::assemble(files.into_iter().map(|f| (f, 0.0)).collect()).unwrap();
        let need_final = RecoveryOptions {
            require_final_state: true,
            ..Default::default()
        };
        assert!(matches!(
            recover(&set, &need_final),
            Err(IoError::FinalStateRequired)
        ));
    }
}
