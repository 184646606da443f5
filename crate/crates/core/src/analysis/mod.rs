//! Closed-form and numerical predictions of decoder behavior.

mod entropy;
mod pareto;
pub mod quad;
mod stationary;
mod straightforward;
mod tail;
mod unl;

pub use entropy::{rate_c, renyi_h, shannon_h};
pub use pareto::{
    decay_exponent, growth_exponent, solve_pareto_c, ParetoResult, MAX_ENUMERATED_PACKETS,
};
pub use stationary::{
    stationary_width_dist, width_transition_prob, StationaryDist, StationaryMode, STATIONARY_CAP,
};
pub use straightforward::{straightforward_log2_prob, straightforward_prob};
pub use tail::{fit_pareto_tail, fit_pareto_tail_censored, FitError, ParetoFit, MIN_FIT_SAMPLES};
pub use unl::{
    unl_fcfec_optimum, unl_fcfec_rate, unl_fcjrc_optimize, unl_jrc_pr, unl_mean_rate,
    unl_moments_quadrature, unl_pr_curve, unl_sigma, unl_summary, FcJrcRow, PrEstimate, UnlSummary,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("list sizes do not decay: {escape:.3e} of the mass leaves the truncation window")]
    NoDecay { escape: f64 },
    #[error("power iteration stopped after {iterations} rounds with residual {residual:.3e}")]
    NonConvergence { iterations: usize, residual: f64 },
}
