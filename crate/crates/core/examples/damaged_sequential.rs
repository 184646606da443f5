//! N - 1 clean packets plus two noisy ones: best-first sequential decoding.

use jrc::bits::{BitSeq, PacketIndexSet};
use jrc::channel::{corrupt_packet, RngStream};
use jrc::codec::{encode, CodecParams, PacketId, TableMode, TransitionTable};
use jrc::decode::{decode_sequential, DecodeBudget, SortedCandidateTable, SortedTableOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = CodecParams::new(8, 64)?.with_seed(11);
    let table = TransitionTable::build(&params, TableMode::Random)?;
    let message = BitSeq::from_bytes(&[0x5a; 1000]);
    let encoded = encode(&message, &params, &table)?;

    let which = PacketIndexSet::new(vec![0, 7, 15, 23, 31, 39, 47, 55, 62])?;
    let mut rx = encoded.emit_subset(std::slice::from_ref(&which))?;
    let mut rng = RngStream::new(1, 0).rng();
    corrupt_packet(&mut rx, PacketId::new(0, 55), 0.05, &mut rng)?;
    corrupt_packet(&mut rx, PacketId::new(0, 62), 0.04, &mut rng)?;

    let sorted = SortedCandidateTable::build(
        &table,
        &rx.layout()?,
        &rx.profiles(),
        SortedTableOptions::default(),
    )?;
    let substeps = encoded.steps();
    let result = decode_sequential(
        &rx.data()?,
        &params,
        &sorted,
        DecodeBudget::from_width(512, substeps),
        Some(encoded.final_state()),
    )?;
    println!(
        "success {}, width {:.3} (nodes {}), final path weight {:.1}",
        result.success, result.width, result.nodes, result.final_weight
    );
    if result.success {
        assert_eq!(result.message, message);
    }
    Ok(())
}
