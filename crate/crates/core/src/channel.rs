//! Binary symmetric channel and packet loss.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitSeq;
use crate::codec::{CodecError, PacketId, ReceivedPackets};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("bit-flip probability {0} outside [0, 0.5]")]
    Probability(f64),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

fn check_eps(eps: f64) -> Result<f64, ChannelError> {
    if (0.0..=0.5).contains(&eps) {
        Ok(eps)
    } else {
        Err(ChannelError::Probability(eps))
    }
}

/// Per-packet bit-flip probabilities `eps_i`, aligned with a packet index set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct NoiseProfile(Vec<f64>);

impl NoiseProfile {
    pub fn new(eps: Vec<f64>) -> Result<Self, ChannelError> {
        for &e in &eps {
            check_eps(e)?;
        }
        Ok(Self(eps))
    }

    pub fn uniform(count: usize, eps: f64) -> Result<Self, ChannelError> {
        Self::new(vec![eps; count])
    }

    pub fn undamaged(count: usize) -> Self {
        Self(vec![0.0; count])
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Packets with `eps = 0`.
    pub fn undamaged_count(&self) -> usize {
        self.0.iter().filter(|&&e| e == 0.0).count()
    }

    /// Concatenation of several profiles (e.g. all phases).
    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a NoiseProfile>) -> Self {
        Self(
            parts
                .into_iter()
                .flat_map(|p| p.0.iter().copied())
                .collect(),
        )
    }
}

impl TryFrom<Vec<f64>> for NoiseProfile {
    type Error = ChannelError;

    fn try_from(v: Vec<f64>) -> Result<Self, ChannelError> {
        Self::new(v)
    }
}

impl From<NoiseProfile> for Vec<f64> {
    fn from(p: NoiseProfile) -> Vec<f64> {
        p.0
    }
}

/// Names an independent, reproducible random stream: ChaCha8 keyed by `seed`
/// on stream number `stream`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    /// A stream derived from this one, for nested structure (trial -> packet).
    pub fn substream(self, index: u64) -> Self {
        Self {
            seed: crate::codec::splitmix::word_at(self.seed ^ self.stream, index),
            stream: self.stream.wrapping_mul(0x100_0000_01b3) ^ index,
        }
    }
}

/// Flips each bit independently with probability `eps`.
pub fn apply_bsc<R: Rng + ?Sized>(
    bits: &BitSeq,
    eps: f64,
    rng: &mut R,
) -> Result<BitSeq, ChannelError> {
    check_eps(eps)?;
    let mut out = bits.clone();
    if eps > 0.0 {
        for i in 0..out.len() {
            if rng.random_bool(eps) {
                out.flip(i);
            }
        }
    }
    Ok(out)
}

/// Passes packet `id` of `rx` through a BSC of `eps` and records `eps` as its noise label.
pub fn corrupt_packet<R: Rng + ?Sized>(
    rx: &mut ReceivedPackets,
    id: PacketId,
    eps: f64,
    rng: &mut R,
) -> Result<(), ChannelError> {
    let packet = rx.get_mut(id).ok_or(CodecError::UnknownPacket(id))?;
    packet.bits = apply_bsc(&packet.bits, eps, rng)?;
    packet.eps = eps;
    Ok(())
}

/// Simulates loss: only the packets in `keep` survive, with their noise labels.
pub fn drop_packets(
    set: &ReceivedPackets,
    keep: &[PacketId],
) -> Result<ReceivedPackets, ChannelError> {
    Ok(set.retain_ids(keep)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{encode, CodecParams, TableMode, TransitionTable};
    use rand::seq::index::sample;

    #[test]
    fn eps_zero_is_identity() {
        let bits = BitSeq::from_bytes(&[0xde, 0xad, 0xbe, 0xef]);
        let out = apply_bsc(&bits, 0.0, &mut RngStream::new(1, 0).rng()).unwrap();
        assert_eq!(out, bits);
    }

    #[test]
    fn eps_half_flips_half() {
        let bits = BitSeq::zeros(100_000);
        let out = apply_bsc(&bits, 0.5, &mut RngStream::new(2, 0).rng()).unwrap();
        let rate = out.count_ones() as f64 / 1e5;
        assert!((rate - 0.5).abs() < 0.01, "{rate}");
    }

    #[test]
    fn eps_point_two_binomial_concentration() {
        let n = 100_000.0;
        let bits = BitSeq::zeros(n as usize);
        let out = apply_bsc(&bits, 0.2, &mut RngStream::new(3, 0).rng()).unwrap();
        let sigma = (n * 0.2 * 0.8f64).sqrt();
        let flips = out.count_ones() as f64;
        assert!((flips - 0.2 * n).abs() < 3.0 * sigma, "{flips}");
    }

    #[test]
    fn flip_counts_pass_chi_square() {
        // 400 blocks of 50 bits at eps = 0.1; bucket the flip counts and compare
        // with Binomial(50, 0.1).
        let mut rng = RngStream::new(4, 9).rng();
        let blocks = 400;
        let n = 50u64;
        let mut counts = [0usize; 9]; // 0..=7, 8+
        for _ in 0..blocks {
            let out = apply_bsc(&BitSeq::zeros(n as usize), 0.1, &mut rng).unwrap();
            counts[out.count_ones().min(8)] += 1;
        }
        let binom = statrs::distribution::Binomial::new(0.1, n).unwrap();
        use statrs::distribution::{Discrete, DiscreteCDF};
        let mut chi2 = 0.0;
        for (k, &c) in counts.iter().enumerate() {
            let p = if k < 8 {
                binom.pmf(k as u64)
            } else {
                1.0 - binom.cdf(7)
            };
            let e = p * blocks as f64;
            chi2 += (c as f64 - e).powi(2) / e;
        }
        // 8 degrees of freedom, 99.9% quantile is 26.12
        assert!(chi2 < 26.12, "chi2 = {chi2}");
    }

    #[test]
    fn same_stream_same_flips() {
        let bits = BitSeq::zeros(5000);
        let a = apply_bsc(&bits, 0.3, &mut RngStream::new(5, 1).rng()).unwrap();
        let b = apply_bsc(&bits, 0.3, &mut RngStream::new(5, 1).rng()).unwrap();
        let c = apply_bsc(&bits, 0.3, &mut RngStream::new(5, 2).rng()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn eps_out_of_range() {
        let bits = BitSeq::zeros(4);
        assert_eq!(
            apply_bsc(&bits, 0.6, &mut RngStream::new(0, 0).rng()),
            Err(ChannelError::Probability(0.6))
        );
        assert!(NoiseProfile::new(vec![0.1, -0.01]).is_err());
    }

    fn encoded() -> ReceivedPackets {
        let p = CodecParams::new(4, 64).unwrap();
        let t = TransitionTable::build(&p, TableMode::Random).unwrap();
        encode(&BitSeq::zeros(64), &p, &t).unwrap().emit_all()
    }

    #[test]
    fn drop_keep_all_empty_and_random() {
        let rx = encoded();
        let all: Vec<PacketId> = rx.ids().collect();
        assert_eq!(drop_packets(&rx, &all).unwrap(), rx);
        let none = drop_packets(&rx, &[]).unwrap();
        assert!(none.is_empty());
        assert!(none.data().is_err());
        let mut rng = RngStream::new(6, 0).rng();
        for m in [1usize, 5, 17, 64] {
            let keep: Vec<PacketId> = sample(&mut rng, 64, m)
                .into_iter()
                .map(|i| PacketId::new(0, i as u8))
                .collect();
            assert_eq!(drop_packets(&rx, &keep).unwrap().len(), m);
        }
        assert!(drop_packets(&rx, &[PacketId::new(0, 64)]).is_err());
    }

    #[test]
    fn corrupt_packet_labels_noise() {
        let mut rx = encoded();
        let id = PacketId::new(0, 3);
        corrupt_packet(&mut rx, id, 0.25, &mut RngStream::new(7, 0).rng()).unwrap();
        assert_eq!(rx.get(id).unwrap().eps, 0.25);
        let profiles = rx.profiles();
        assert_eq!(profiles[0].values()[3], 0.25);
        assert_eq!(profiles[0].undamaged_count(), 63);
    }
}
