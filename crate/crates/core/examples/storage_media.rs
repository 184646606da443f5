//! Storage layout: a permutation subset of N packets decodes by table lookup,
//! and any other N + 1 packets still recover the data by list decoding.

use jrc::bits::{BitSeq, PacketIndexSet};
use jrc::codec::{encode, CodecParams, TableMode, TransitionTable};
use jrc::decode::{decode_list, decode_straightforward, ListBudget, PartitionTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 8;
    let params = CodecParams::new(n, 64)?.with_seed(7);
    let primary = PacketIndexSet::new((0..8).map(|i| i * 8).collect())?;
    let table = TransitionTable::build(&params, TableMode::Permutation(primary.clone()))?;
    let data: Vec<u8> = (0..4096u32).map(|i| (i * 131 % 256) as u8).collect();
    let message = BitSeq::from_bytes(&data);
    let encoded = encode(&message, &params, &table)?;

    // level 1: the primary disks alone
    let rx = encoded.emit_subset(std::slice::from_ref(&primary))?;
    let fast = decode_straightforward(
        &rx.data()?,
        &params,
        &PartitionTable::build(&table, &[primary])?,
        None,
    )?;
    assert_eq!(fast.message, message);
    println!("primary group: {} lookups, no search", fast.steps);

    // level 2: primary disks lost, nine redundancy disks remain
    let spare = PacketIndexSet::new(vec![1, 9, 12, 20, 27, 35, 44, 50, 63])?;
    let rx = encoded.emit_subset(std::slice::from_ref(&spare))?;
    let pt = PartitionTable::build(&table, &[spare])?;
    let slow = decode_list(
        &rx.data()?,
        &params,
        &pt,
        Some(encoded.final_state()),
        ListBudget::default(),
    )?;
    assert_eq!(slow.messages[0], message);
    println!("redundancy disks: list width {:.3}", slow.width);
    Ok(())
}
