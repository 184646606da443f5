/// `lg` of the probability that a uniformly random table admits straightforward
/// decoding: that `2^N` random `M`-bit syndromes are pairwise distinct.
pub fn straightforward_log2_prob(n: u8, m: u8) -> f64 {
    if m < n {
        return f64::NEG_INFINITY;
    }
    let scale = (-f64::from(m)).exp2();
    let log_e: f64 = (0..1u64 << n).map(|j| (-(j as f64) * scale).ln_1p()).sum();
    log_e / std::f64::consts::LN_2
}

/// `(2^M)! / (2^M - 2^N)! / (2^M)^{2^N}`, evaluated in the log domain.
pub fn straightforward_prob(n: u8, m: u8) -> f64 {
    straightforward_log2_prob(n, m).exp2()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases_by_counting() {
        assert_eq!(straightforward_prob(1, 1), 0.5);
        // 4 distinct values out of 8: 8*7*6*5 / 8^4
        let exact = 8.0 * 7.0 * 6.0 * 5.0 / 4096.0;
        assert!((straightforward_prob(2, 3) - exact).abs() < 1e-15);
        assert!((straightforward_prob(2, 3) - 0.41016).abs() < 1e-5);
        assert_eq!(straightforward_prob(3, 2), 0.0);
    }

    #[test]
    fn tiny_probabilities_stay_finite() {
        let l = straightforward_log2_prob(8, 8);
        assert!(l.is_finite());
        assert!((l - 3e-110f64.log2()).abs() < 1.0, "{l}");
    }
}
