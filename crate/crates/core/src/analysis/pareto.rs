use serde::{Deserialize, Serialize};

use super::{rate_c, shannon_h, AnalysisError};
use crate::channel::NoiseProfile;

/// Largest profile accepted by the enumeration-based exponent solvers.
pub const MAX_ENUMERATED_PACKETS: usize = 20;

/// Where a noise profile sits relative to the block size `N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum ParetoResult {
    /// Capacity `sum R_0` falls short of `N` by `deficit`: decoding cannot succeed.
    BelowShannon { capacity: f64, deficit: f64 },
    /// Widths have a Pareto tail `Pr(width > w) ~ w^-c`.
    FiniteC { c: f64 },
    /// At least `N` undamaged packets: the search cost has no heavy tail.
    UndamagedSurplus,
}

impl ParetoResult {
    pub fn c(&self) -> Option<f64> {
        match self {
            Self::FiniteC { c } => Some(*c),
            _ => None,
        }
    }
}

/// Solves `N = sum_i R_c(eps_i)` for `c` by bisection.
///
/// The sum is continuous and strictly decreasing in `c`, from the capacity at
/// `c = 0` down to the count of undamaged packets as `c -> inf`, so a root
/// exists exactly when the capacity reaches `N` and fewer than `N` packets are
/// undamaged.
pub fn solve_pareto_c(profile: &NoiseProfile, n: u8) -> ParetoResult {
    let n = f64::from(n);
    if profile.undamaged_count() as f64 >= n {
        return ParetoResult::UndamagedSurplus;
    }
    let total = |c: f64| profile.values().iter().map(|&e| rate_c(c, e)).sum::<f64>();
    let capacity: f64 = profile.values().iter().map(|&e| 1.0 - shannon_h(e)).sum();
    if capacity < n {
        return ParetoResult::BelowShannon {
            capacity,
            deficit: n - capacity,
        };
    }
    let mut lo = 0.0;
    let mut hi = 64.0;
    while total(hi) > n && hi < 1e9 {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > 1e-12 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if total(mid) > n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ParetoResult::FiniteC { c: 0.5 * (lo + hi) }
}

/// Growth exponent `u` of the improper-subtree size: the root in `(0, 1)` of
/// `2^{N-M} sum_E 2^{u W(E)} = 1`, by enumerating every error pattern `E`.
///
/// `None` when only the trivial root `u = 1` exists.
pub fn growth_exponent(profile: &NoiseProfile, n: u8) -> Result<Option<f64>, AnalysisError> {
    let weights = enumerate_weights(profile, n)?;
    let m = profile.len() as f64;
    let g = |u: f64| {
        let terms: Vec<f64> = weights.iter().map(|&(_, w)| u * w).collect();
        f64::from(n) - m + log2_sum_exp2(&terms)
    };
    Ok(nontrivial_root(g, true))
}

/// Decay exponent `v` of the correct path's weight drops: the root in `(0, 1)`
/// of `sum_E Pr(E) 2^{-v W(E)} = 1`.
///
/// `None` when only the trivial root `v = 0` exists.
pub fn decay_exponent(profile: &NoiseProfile, n: u8) -> Result<Option<f64>, AnalysisError> {
    let weights = enumerate_weights(profile, n)?;
    let k = |v: f64| {
        let terms: Vec<f64> = weights
            .iter()
            .filter(|&&(lp, _)| lp > f64::NEG_INFINITY)
            .map(|&(lp, w)| lp - v * w)
            .collect();
        log2_sum_exp2(&terms)
    };
    Ok(nontrivial_root(k, false))
}

/// `(lg Pr(E), W(E))` for every `E`, skipping patterns with `W = -inf`.
fn enumerate_weights(profile: &NoiseProfile, n: u8) -> Result<Vec<(f64, f64)>, AnalysisError> {
    let m = profile.len();
    if m == 0 || m > MAX_ENUMERATED_PACKETS {
        return Err(AnalysisError::InvalidInput(format!(
            "exponent enumeration needs 1..={MAX_ENUMERATED_PACKETS} packets, got {m}"
        )));
    }
    let eps = profile.values();
    let offset = m as f64 - f64::from(n);
    Ok((0..1u64 << m)
        .filter_map(|e| {
            let lp: f64 = (0..m)
                .map(|i| {
                    if e >> i & 1 == 1 {
                        eps[i].log2()
                    } else {
                        (1.0 - eps[i]).log2()
                    }
                })
                .sum();
            (lp > f64::NEG_INFINITY).then_some((lp, offset + lp))
        })
        .collect())
}

fn log2_sum_exp2(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|&t| (t - max).exp2()).sum::<f64>().log2()
}

/// Root in `(0, 1)` of a convex `f` that also vanishes at the trivial end
/// (`1` when `trivial_at_one`, else `0`).
fn nontrivial_root(f: impl Fn(f64) -> f64, trivial_at_one: bool) -> Option<f64> {
    // golden-section search for the minimum
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (0.0, 1.0);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-12 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    let min_at = 0.5 * (a + b);
    if f(min_at) >= -1e-15 {
        return None;
    }
    let (mut lo, mut hi) = if trivial_at_one {
        (0.0, min_at)
    } else {
        (min_at, 1.0)
    };
    // the far end must be positive for a sign change; it is N minus the number
    // of undamaged packets, so this rules out the surplus case
    let far = if trivial_at_one { f(0.0) } else { f(1.0) };
    if far <= 1e-12 {
        return None;
    }
    let f_lo_positive = trivial_at_one;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == f_lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}
