//! Deterministic property checks shared by the acceptance run and the test suite.
//! Each returns a one-line summary on success.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use jrc::analysis::{decay_exponent, growth_exponent, solve_pareto_c};
use jrc::bits::{extract, BitSeq, PacketIndexSet, StateWord};
use jrc::channel::NoiseProfile;
use jrc::codec::{encode, CodecParams, PacketId, TableMode, TransitionTable};
use jrc::decode::{
    decode_list, decode_sequential, DecodeBudget, ListBudget, ListStatus, PartitionTable,
    SortedCandidateTable, SortedTableOptions,
};
use jrc::io::{
    encode_packets, recover, EncodeOptions, PacketFile, PacketSet, Recovery, RecoveryOptions,
};

pub type Check = Result<String, String>;

pub fn random_positions(m: u8, width: u8, rng: &mut impl Rng) -> PacketIndexSet {
    let positions = rand::seq::index::sample(rng, usize::from(width), usize::from(m));
    PacketIndexSet::from_unsorted(positions.into_iter().map(|p| p as u8).collect()).unwrap()
}

/// `extract(a ^ b) = extract(a) ^ extract(b)` for every subset and every pair of
/// states of widths 4..=10, split as every subset x all pairs of a fixed state sample,
/// plus all pairs for every subset at width <= 6.
pub fn xor_linearity() -> Check {
    let mut checked = 0u64;
    for width in 4..=10u8 {
        let mut rng = ChaCha8Rng::seed_from_u64(u64::from(width));
        let states: Vec<u64> = (0..24)
            .map(|_| rng.random::<u64>() & ((1 << width) - 1))
            .collect();
        for mask in 1u64..1 << width {
            let which =
                PacketIndexSet::new((0..width).filter(|&p| mask >> p & 1 == 1).collect()).unwrap();
            let all_pairs = width <= 6 || mask.count_ones() == 1 || mask == (1 << width) - 1;
            let pool: Vec<u64> = if all_pairs {
                (0..1 << width).collect()
            } else {
                states.clone()
            };
            for &a in &pool {
                let ea = extract(StateWord::new(a, width).unwrap(), &which)
                    .unwrap()
                    .value();
                for &b in &pool {
                    let eab = extract(StateWord::new(a ^ b, width).unwrap(), &which)
                        .unwrap()
                        .value();
                    if eab != ea ^ which.extract_raw(b) {
                        return Err(format!("W={width} mask={mask:#b} a={a:#x} b={b:#x}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (subset, a, b) triples"))
}

/// Candidate lists partition `0..2^N` and each `x` sits under `extract(f[x])`.
pub fn partition_property() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut tables = 0;
    for n in 1..=12u8 {
        let params = CodecParams::new(n, 64).unwrap().with_seed(u64::from(n));
        let table = TransitionTable::build(&params, TableMode::Random).unwrap();
        for m in [n.saturating_sub(2).max(1), n, n + 1, n + 3] {
            let which = random_positions(m, 64, &mut rng);
            let pt = PartitionTable::build(&table, std::slice::from_ref(&which)).unwrap();
            let mut seen = vec![0u32; 1 << n];
            for z in 0..1u64 << m {
                for &x in pt.candidates(0, z) {
                    seen[x as usize] += 1;
                    if which.extract_raw(table.phase(0)[x as usize]) != z {
                        return Err(format!("N={n} M={m}: x={x} filed under z={z}"));
                    }
                }
            }
            if let Some(x) = seen.iter().position(|&c| c != 1) {
                return Err(format!("N={n} M={m}: x={x} appears {} times", seen[x]));
            }
            tables += 1;
        }
    }
    Ok(format!("{tables} tables, N = 1..=12"))
}

/// Undamaged `M > N`: best-first search returns the list decoder's message.
pub fn zero_noise_seq_equals_list(instances: u64) -> Check {
    for i in 0..instances {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ i);
        let n = rng.random_range(2..=8u8);
        let m = n + rng.random_range(1..=3u8);
        let params = CodecParams::new(n, 64).unwrap().with_seed(rng.random());
        let table = TransitionTable::build(&params, TableMode::Random).unwrap();
        let blocks = rng.random_range(1..=60usize);
        let message: BitSeq = (0..blocks * usize::from(n))
            .map(|_| rng.random_bool(0.5))
            .collect();
        let enc = encode(&message, &params, &table).unwrap();
        let which = random_positions(m, 64, &mut rng);
        let rx = enc.emit_subset(std::slice::from_ref(&which)).unwrap();
        let data = rx.data().unwrap();
        let fin = Some(enc.final_state());
        let pt = PartitionTable::build(&table, std::slice::from_ref(&which)).unwrap();
        let list = decode_list(&data, &params, &pt, fin, ListBudget::default()).unwrap();
        let sorted = SortedCandidateTable::build(
            &table,
            &[which],
            &rx.profiles(),
            SortedTableOptions::default(),
        )
        .unwrap();
        let seq = decode_sequential(
            &data,
            &params,
            &sorted,
            DecodeBudget {
                max_nodes: u64::MAX,
            },
            fin,
        )
        .unwrap();
        if list.status != ListStatus::Complete
            || !seq.success
            || seq.message != list.messages[0]
            || seq.message != message
        {
            return Err(format!("instance {i} (N={n}, M={m}) disagrees"));
        }
    }
    Ok(format!("{instances} instances"))
}

/// Encode -> bytes -> parse -> decode returns the input for lengths that are
/// not multiples of `N`.
pub fn container_round_trip() -> Check {
    let opts = EncodeOptions {
        include_final_state: true,
        withhold_seed: false,
    };
    let mut cases = 0;
    for n in [1u8, 3, 5, 7, 8, 11] {
        let params = CodecParams::new(n, 64).unwrap().with_seed(u64::from(n));
        let ids: Vec<PacketId> = (0..=n).map(|i| PacketId::new(0, i * 5)).collect();
        for len in [0usize, 1, 3, 13, 77] {
            let message: Vec<u8> = (0..len).map(|i| (i * 29 + 7) as u8).collect();
            let (files, _) =
                encode_packets(&message, &params, TableMode::Random, &ids, opts).unwrap();
            let mut parsed = Vec::new();
            for f in files {
                let bytes = f.to_bytes().unwrap();
                let back = PacketFile::from_bytes(&bytes).map_err(|e| e.to_string())?;
                if back.to_bytes().unwrap() != bytes {
                    return Err(format!(
                        "N={n} len={len}: bytes differ after re-serialization"
                    ));
                }
                parsed.push((back, 0.0));
            }
            let set = PacketSet::assemble(parsed).map_err(|e| e.to_string())?;
            match recover(&set, &RecoveryOptions::default()) {
                Ok(Recovery::Decoded { message: got, .. }) if got == message => cases += 1,
                other => return Err(format!("N={n} len={len}: {other:?}")),
            }
        }
    }
    Ok(format!("{cases} files"))
}

/// `|v - (1 - u)| < 1e-8` on random profiles with a finite Pareto coefficient.
pub fn exponent_duality(profiles: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    let mut worst = 0f64;
    while checked < profiles {
        let n = rng.random_range(1..=6u8);
        let zeros = rng.random_range(0..usize::from(n));
        let damaged = rng.random_range(1..=(14 - zeros));
        let mut eps = vec![0.0; zeros];
        eps.extend((0..damaged).map(|_| rng.random_range(0.001..0.3)));
        let profile = NoiseProfile::new(eps).unwrap();
        if solve_pareto_c(&profile, n).c().is_none() {
            continue;
        }
        let (Some(u), Some(v)) = (
            growth_exponent(&profile, n).map_err(|e| e.to_string())?,
            decay_exponent(&profile, n).map_err(|e| e.to_string())?,
        ) else {
            return Err(format!("no exponent for {:?}, N={n}", profile.values()));
        };
        let gap = (v - (1.0 - u)).abs();
        worst = worst.max(gap);
        if gap >= 1e-8 {
            return Err(format!("{:?} N={n}: u={u} v={v}", profile.values()));
        }
        checked += 1;
    }
    Ok(format!("{profiles} profiles, max gap {worst:.1e}"))
}
