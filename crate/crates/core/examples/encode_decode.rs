//! Encode a message, keep N + 1 undamaged packets, and recover it with the list decoder.

use jrc::bits::{BitSeq, PacketIndexSet};
use jrc::codec::{encode, CodecParams, TableMode, TransitionTable};
use jrc::decode::{decode_list, ListBudget, PartitionTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = CodecParams::new(8, 64)?.with_seed(42);
    let table = TransitionTable::build(&params, TableMode::Random)?;
    let message = BitSeq::from_bytes(b"packets are payload and redundancy at once");
    let encoded = encode(&message, &params, &table)?;

    // any N + 1 state bits will do
    let which = PacketIndexSet::from_unsorted(vec![3, 9, 17, 22, 30, 38, 45, 51, 60])?;
    let received = encoded.emit_subset(std::slice::from_ref(&which))?;
    let partition = PartitionTable::build(&table, &[which])?;
    let result = decode_list(
        &received.data()?,
        &params,
        &partition,
        Some(encoded.final_state()),
        ListBudget::default(),
    )?;

    let recovered = String::from_utf8(result.messages[0].pack())?;
    println!(
        "status {:?}, width {:.3} candidates per step",
        result.status, result.width
    );
    println!("recovered: {recovered}");
    assert_eq!(result.messages[0], message);
    Ok(())
}
