//! N = 24 split over two phases of 12 bits, decoded from 13 undamaged packets per phase.

use jrc::bits::{BitSeq, PacketIndexSet};
use jrc::codec::{encode, CodecParams, TableMode, TransitionTable};
use jrc::decode::{decode_list, ListBudget, PartitionTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = CodecParams::interleaved(24, 64, 2)?.with_seed(5);
    println!("phase bits {:?}", params.phase_bits());
    let table = TransitionTable::build(&params, TableMode::Random)?;
    let message = BitSeq::from_bytes(&(0..600u32).map(|i| (i % 251) as u8).collect::<Vec<_>>());
    let encoded = encode(&message, &params, &table)?;
    let which: Vec<PacketIndexSet> = (0..2u8)
        .map(|s| PacketIndexSet::from_unsorted((0..13u8).map(|i| (i * 5 + s) % 64).collect()))
        .collect::<Result<_, _>>()?;
    let rx = encoded.emit_subset(&which)?;
    let pt = PartitionTable::build(&table, &which)?;
    let r = decode_list(
        &rx.data()?,
        &params,
        &pt,
        Some(encoded.final_state()),
        ListBudget::default(),
    )?;
    assert_eq!(r.messages[0], message);
    println!("recovered {} bits, width {:.3}", message.len(), r.width);
    Ok(())
}
