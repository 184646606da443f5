use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Fewest samples [`fit_pareto_tail`] accepts.
pub const MIN_FIT_SAMPLES: usize = 50;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("need at least {MIN_FIT_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
    #[error("tail is degenerate: fewer than two distinct uncensored widths in the fit range")]
    Undefined,
}

/// Least-squares line `lg Pr(width >= w) = lg c_p - c_hat lg w` over the tail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParetoFit {
    pub c_hat: f64,
    pub c_p: f64,
    /// Smallest and largest width used.
    pub range: (f64, f64),
    /// Number of points in the regression.
    pub points: usize,
}

/// Fits the upper quartile of `sorted` (ascending) widths.
pub fn fit_pareto_tail(sorted: &[f64]) -> Result<ParetoFit, FitError> {
    let flags = vec![false; sorted.len()];
    fit_pareto_tail_censored(sorted, &flags)
}

/// As [`fit_pareto_tail`], but samples flagged `censored` (stopped at the
/// budget, true width unknown) count towards the survival function and are
/// left out of the regression.
pub fn fit_pareto_tail_censored(sorted: &[f64], censored: &[bool]) -> Result<ParetoFit, FitError> {
    let n = sorted.len();
    if n < MIN_FIT_SAMPLES {
        return Err(FitError::TooFewSamples(n));
    }
    debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
    let start = n - n / 4;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut k = start;
    while k < n {
        // one point per distinct width: Pr(width >= w) counts every tied sample
        let w = sorted[k];
        let mut first = k;
        while first > 0 && sorted[first - 1] == w {
            first -= 1;
        }
        let mut end = k;
        while end < n && sorted[end] == w {
            end += 1;
        }
        if !censored[k] && w > 0.0 {
            xs.push(w.log2());
            ys.push(((n - first) as f64 / n as f64).log2());
        }
        k = end;
    }
    if xs.len() < 2 {
        return Err(FitError::Undefined);
    }
    let count = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / count;
    let my = ys.iter().sum::<f64>() / count;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx <= 0.0 {
        return Err(FitError::Undefined);
    }
    let slope = sxy / sxx;
    Ok(ParetoFit {
        c_hat: -slope,
        c_p: (my - slope * mx).exp2(),
        range: (xs[0].exp2(), xs[xs.len() - 1].exp2()),
        points: xs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::RngStream;
    use rand::Rng;

    #[test]
    fn recovers_exact_pareto() {
        for (seed, c) in [(1u64, 1.0), (2, 0.5), (3, 2.0)] {
            let mut rng = RngStream::new(seed, 0).rng();
            let mut w: Vec<f64> = (0..20_000)
                .map(|_| (1.0 - rng.random::<f64>()).powf(-1.0 / c))
                .collect();
            w.sort_by(f64::total_cmp);
            let fit = fit_pareto_tail(&w).unwrap();
            assert!((fit.c_hat - c).abs() < 0.1 * c, "c={c} fit={fit:?}");
            assert!((fit.c_p - 1.0).abs() < 0.2, "{fit:?}");
        }
    }

    #[test]
    fn constant_widths_are_undefined() {
        assert_eq!(fit_pareto_tail(&[1.0; 100]), Err(FitError::Undefined));
        assert_eq!(
            fit_pareto_tail(&[1.0; 10]),
            Err(FitError::TooFewSamples(10))
        );
    }

    #[test]
    fn censored_points_are_skipped() {
        let mut w: Vec<f64> = (1..=100).map(f64::from).collect();
        let mut flags = vec![false; 100];
        for i in 90..100 {
            w[i] = 256.0;
            flags[i] = true;
        }
        let fit = fit_pareto_tail_censored(&w, &flags).unwrap();
        assert_eq!(fit.range.1, 90.0);
        assert_eq!(fit.points, 15);
    }
}
