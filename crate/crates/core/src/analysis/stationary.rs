use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::AnalysisError;

/// Largest candidate count tracked by [`stationary_width_dist`].
pub const STATIONARY_CAP: usize = 64;

/// How the list-size transition probabilities are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StationaryMode {
    /// Binomial law of the surviving improper candidates.
    Exact,
    /// Its Poisson limit for large `N`: mean `i 2^{N-M}`.
    Asymptotic,
}

/// Stationary law of the number of candidates per position.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StationaryDist {
    /// `probs[i - 1] = p_i` for `i = 1..=64`.
    pub probs: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    /// L1 distance between `p` and `pP` at exit.
    pub residual: f64,
    pub iterations: usize,
}

impl StationaryDist {
    /// `p_i`, zero outside the window.
    pub fn p(&self, i: usize) -> f64 {
        i.checked_sub(1)
            .and_then(|k| self.probs.get(k))
            .copied()
            .unwrap_or(0.0)
    }
}

/// Probability of `j` candidates at the next position given `i` now: each of
/// the `2^N i - 1` improper children survives with probability `2^-M`.
pub fn width_transition_prob(i: usize, j: usize, n: u8, m: u8, mode: StationaryMode) -> f64 {
    if i == 0 || j == 0 {
        return 0.0;
    }
    let k = (j - 1) as f64;
    match mode {
        StationaryMode::Exact => {
            let trials = (i as f64) * f64::from(n).exp2() - 1.0;
            if k > trials {
                return 0.0;
            }
            let q = (-f64::from(m)).exp2();
            let ln_choose = ln_gamma(trials + 1.0) - ln_gamma(k + 1.0) - ln_gamma(trials - k + 1.0);
            (ln_choose + k * q.ln() + (trials - k) * (-q).ln_1p()).exp()
        }
        StationaryMode::Asymptotic => {
            let lambda = i as f64 * (f64::from(n) - f64::from(m)).exp2();
            (-lambda + k * lambda.ln() - ln_gamma(k + 1.0)).exp()
        }
    }
}

/// Power iteration for `p = pP` over `1..=64` candidates, rows renormalized.
///
/// Fails with [`AnalysisError::NoDecay`] when the chain pushes noticeable mass
/// past the window, as happens for `M = N` where lists do not shrink.
pub fn stationary_width_dist(
    n: u8,
    m: u8,
    mode: StationaryMode,
) -> Result<StationaryDist, AnalysisError> {
    if m < n {
        return Err(AnalysisError::InvalidInput(format!(
            "M = {m} below N = {n}"
        )));
    }
    let cap = STATIONARY_CAP;
    let mut rows = vec![vec![0.0; cap]; cap];
    let mut kept = vec![0.0; cap];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, p) in row.iter_mut().enumerate() {
            *p = width_transition_prob(i + 1, j + 1, n, m, mode);
        }
        kept[i] = row.iter().sum();
        for p in row.iter_mut() {
            *p /= kept[i];
        }
    }

    let mut p = vec![0.0; cap];
    p[0] = 1.0;
    let max_iter = 100_000;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iter {
        let mut next = vec![0.0; cap];
        for (pi, row) in p.iter().zip(&rows) {
            for (nj, pij) in next.iter_mut().zip(row) {
                *nj += pi * pij;
            }
        }
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= total);
        residual = next.iter().zip(&p).map(|(a, b)| (a - b).abs()).sum();
        p = next;
        iterations += 1;
        if residual <= 1e-12 {
            break;
        }
    }
    let escape: f64 = p.iter().zip(&kept).map(|(pi, k)| pi * (1.0 - k)).sum();
    if escape > 1e-6 {
        return Err(AnalysisError::NoDecay { escape });
    }
    if residual > 1e-10 {
        return Err(AnalysisError::NonConvergence {
            iterations,
            residual,
        });
    }
    let mean: f64 = p.iter().enumerate().map(|(k, v)| (k + 1) as f64 * v).sum();
    let var: f64 = p
        .iter()
        .enumerate()
        .map(|(k, v)| ((k + 1) as f64 - mean).powi(2) * v)
        .sum();
    Ok(StationaryDist {
        probs: p,
        mean,
        std: var.sqrt(),
        residual,
        iterations,
    })
}
