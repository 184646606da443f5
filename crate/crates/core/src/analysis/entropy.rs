//! Shannon and Renyi entropies of a binary symmetric channel and the rate family built on them.

/// `h(eps) = -eps lg eps - (1 - eps) lg (1 - eps)`, with `h(0) = h(1) = 0`.
pub fn shannon_h(eps: f64) -> f64 {
    if eps <= 0.0 || eps >= 1.0 {
        return 0.0;
    }
    -eps * eps.log2() - (1.0 - eps) * (1.0 - eps).log2()
}

/// Renyi entropy of order `u > 0`: `lg(eps^u + (1 - eps)^u) / (1 - u)`.
/// Falls back to [`shannon_h`] when `|u - 1| < 1e-6`.
pub fn renyi_h(u: f64, eps: f64) -> f64 {
    if (u - 1.0).abs() < 1e-6 {
        return shannon_h(eps);
    }
    (eps.powf(u) + (1.0 - eps).powf(u)).log2() / (1.0 - u)
}

/// `R_c(eps) = 1 - h_{1/(1+c)}(eps)`: the rate at which sequential decoding
/// has Pareto coefficient `c`. `R_0` is the Shannon capacity, `R_1` the cutoff rate.
pub fn rate_c(c: f64, eps: f64) -> f64 {
    1.0 - renyi_h(1.0 / (1.0 + c), eps)
}
