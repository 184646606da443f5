//! Channels whose noise level is known to the receiver but only in distribution
//! to the sender: `eps` uniform on `[0, 1/2]`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::quad::integrate;
use super::shannon_h;
use crate::channel::RngStream;

/// Mean capacity `2 ∫_0^{1/2} (1 - h(eps)) d eps = 1 - 1/ln 4`.
pub fn unl_mean_rate() -> f64 {
    1.0 - 1.0 / 4f64.ln()
}

/// Standard deviation of the capacity: `sqrt(21 - 2 pi^2) / (6 ln 2)`.
pub fn unl_sigma() -> f64 {
    (21.0 - 2.0 * std::f64::consts::PI.powi(2)).sqrt() / (6.0 * std::f64::consts::LN_2)
}

/// [`unl_mean_rate`] and [`unl_sigma`] by numerical quadrature.
pub fn unl_moments_quadrature() -> (f64, f64) {
    let tol = 1e-13;
    let mean = 2.0 * integrate(|e| 1.0 - shannon_h(e), 0.0, 0.5, tol);
    let second = 2.0 * integrate(|e| (1.0 - shannon_h(e)).powi(2), 0.0, 0.5, tol);
    (mean, (second - mean * mean).sqrt())
}

/// Fountain code over forward error correction designed for `eps_bar`: packets
/// with `eps <= eps_bar` (probability `2 eps_bar`) carry `1 - h(eps_bar)` each.
pub fn unl_fcfec_rate(eps_bar: f64) -> f64 {
    2.0 * eps_bar * (1.0 - shannon_h(eps_bar))
}

/// Maximizer of [`unl_fcfec_rate`] by golden-section search: `(eps_bar, rate)`.
pub fn unl_fcfec_optimum() -> (f64, f64) {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (0.0, 0.5);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    while b - a > 1e-12 {
        if unl_fcfec_rate(c) > unl_fcfec_rate(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - phi * (b - a);
        d = a + phi * (b - a);
    }
    let x = 0.5 * (a + b);
    (x, unl_fcfec_rate(x))
}

/// A Monte Carlo probability with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrEstimate {
    pub m: usize,
    pub p: f64,
    pub stderr: f64,
}

const SHARDS: u64 = 64;

/// `p_r(N, M) = Pr(sum_{i<=M} (1 - h(eps_i)) > N)` for every `M` in `1..=m_max`.
///
/// Each sample draws packets until the capacity exceeds `N`, so one pass
/// gives the whole curve. Shards use disjoint streams of `seed`, so the result
/// does not depend on the thread count.
pub fn unl_pr_curve(n: u32, m_max: usize, samples: u64, seed: u64) -> Vec<PrEstimate> {
    let target = f64::from(n);
    let hist = (0..SHARDS)
        .into_par_iter()
        .map(|shard| {
            let count = samples / SHARDS + u64::from(shard < samples % SHARDS);
            let mut rng = RngStream::new(seed, shard).rng();
            let mut hist = vec![0u64; m_max + 1];
            for _ in 0..count {
                let mut sum = 0.0;
                // index of the first packet that lifts the sum above N
                for slot in hist.iter_mut().skip(1) {
                    sum += 1.0 - shannon_h(rng.random::<f64>() * 0.5);
                    if sum > target {
                        *slot += 1;
                        break;
                    }
                }
            }
            hist
        })
        .reduce(
            || vec![0u64; m_max + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let total = samples.max(1) as f64;
    let mut cum = 0u64;
    (1..=m_max)
        .map(|m| {
            cum += hist[m];
            let p = cum as f64 / total;
            PrEstimate {
                m,
                p,
                stderr: (p * (1.0 - p) / total).sqrt(),
            }
        })
        .collect()
}

/// Single point of [`unl_pr_curve`].
pub fn unl_jrc_pr(n: u32, m: usize, samples: u64, seed: u64) -> PrEstimate {
    unl_pr_curve(n, m, samples, seed)[m - 1]
}

/// Best fountain code over JRC configuration for block size `N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FcJrcRow {
    pub n: u32,
    pub m: usize,
    pub p_r: f64,
    pub rate: f64,
}

/// Maximizes `(N / M) p_r(N, M)` over `M in [N, 8N]`.
pub fn unl_fcjrc_optimize(n: u32, samples: u64, seed: u64) -> FcJrcRow {
    let m_max = 8 * n as usize;
    let curve = unl_pr_curve(n, m_max, samples, seed);
    curve[n as usize - 1..]
        .iter()
        .map(|e| FcJrcRow {
            n,
            m: e.m,
            p_r: e.p,
            rate: f64::from(n) / e.m as f64 * e.p,
        })
        .max_by(|a, b| a.rate.total_cmp(&b.rate))
        .expect("non-empty range")
}

/// All quantities of the three approaches, for one report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnlSummary {
    pub mean_rate: f64,
    pub sigma: f64,
    pub fcfec_eps: f64,
    pub fcfec_rate: f64,
    /// `p_r(2, M)` for `M = 3..=16`.
    pub pr_table: Vec<PrEstimate>,
    pub fcjrc: Vec<FcJrcRow>,
}

/// Computes a [`UnlSummary`] with `samples` Monte Carlo draws per curve.
pub fn unl_summary(samples: u64, seed: u64, table_rows: &[u32]) -> UnlSummary {
    let (fcfec_eps, fcfec_rate) = unl_fcfec_optimum();
    UnlSummary {
        mean_rate: unl_mean_rate(),
        sigma: unl_sigma(),
        fcfec_eps,
        fcfec_rate,
        pr_table: unl_pr_curve(2, 16, samples, seed)[2..].to_vec(),
        fcjrc: table_rows
            .iter()
            .map(|&n| unl_fcjrc_optimize(n, samples, seed ^ u64::from(n)))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_match_quadrature() {
        let (mean, sigma) = unl_moments_quadrature();
        assert!((mean - unl_mean_rate()).abs() < 1e-8, "{mean}");
        assert!((sigma - unl_sigma()).abs() < 1e-8, "{sigma}");
        assert!((unl_mean_rate() - 0.27865).abs() < 1e-4);
        assert!((unl_sigma() - 0.26999).abs() < 1e-4);
    }

    #[test]
    fn fcfec_optimum() {
        let (e, r) = unl_fcfec_optimum();
        assert!((r - 0.11712).abs() < 1e-4, "{r}");
        assert!((e - 0.15455).abs() < 1e-3, "{e}");
        assert_eq!(unl_fcfec_rate(0.0), 0.0);
        assert!(unl_fcfec_rate(0.5).abs() < 1e-15);
    }

    #[test]
    fn pr_is_monotone_and_deterministic() {
        let a = unl_pr_curve(2, 16, 20_000, 7);
        let b = unl_pr_curve(2, 16, 20_000, 7);
        assert_eq!(a, b);
        assert_eq!(a[1].p, 0.0); // two packets never exceed N = 2
        assert!(a.windows(2).all(|w| w[0].p <= w[1].p));
        assert!((a[7].p - 0.593).abs() < 0.02);
    }
}
