//! Packet files on disk: write, damage, list in a manifest, and recover.

use jrc::channel::{apply_bsc, RngStream};
use jrc::codec::{CodecParams, PacketId, TableMode};
use jrc::io::{
    encode_packets, recover, EncodeOptions, EpsilonManifest, PacketFile, PacketSet, RecoveryOptions,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("jrc-packet-files");
    std::fs::create_dir_all(&dir)?;
    let message = b"a message whose length is not a multiple of N".to_vec();
    let params = CodecParams::new(5, 64)?.with_seed(99);
    let ids: Vec<PacketId> = [0u8, 10, 21, 32, 42, 53]
        .iter()
        .map(|&p| PacketId::new(0, p))
        .collect();
    let options = EncodeOptions {
        include_final_state: true,
        withhold_seed: false,
    };
    let (files, _) = encode_packets(&message, &params, TableMode::Random, &ids, options)?;

    let mut manifest = EpsilonManifest::default();
    let mut rng = RngStream::new(3, 0).rng();
    for (i, mut f) in files.into_iter().enumerate() {
        // the last packet went through a noisy channel
        let eps = if i == 5 { 0.03 } else { 0.0 };
        f.payload = apply_bsc(&f.payload, eps, &mut rng)?;
        let path = dir.join(format!("p{i}.jrc"));
        f.write_to(std::fs::File::create(&path)?)?;
        manifest.entries.push((path, eps));
    }
    std::fs::write(dir.join("manifest.txt"), manifest.render(&dir))?;

    let loaded = EpsilonManifest::load(&dir.join("manifest.txt"))?;
    let files = loaded
        .entries
        .into_iter()
        .map(|(p, e)| Ok((PacketFile::read_from(std::fs::File::open(p)?)?, e)))
        .collect::<Result<Vec<_>, Box<dyn std::error::Error>>>()?;
    let set = PacketSet::assemble(files)?;
    let outcome = recover(&set, &RecoveryOptions::default())?;
    println!("{outcome:?}");
    Ok(())
}
