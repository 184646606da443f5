//! Randomized width experiments: many encode → damage → decode trials, their
//! sorted widths, and a Pareto fit of the tail.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{
    fit_pareto_tail_censored, solve_pareto_c, unl_summary, ParetoFit, ParetoResult, UnlSummary,
};
use crate::bits::{BitSeq, PacketIndexSet};
use crate::channel::{corrupt_packet, NoiseProfile, RngStream};
use crate::codec::{encode, CodecParams, PacketId, TableMode, TransitionTable};
use crate::decode::{
    decode_list, decode_sequential, DecodeBudget, DecodeError, ListBudget, ListStatus,
    PartitionTable, SeqFailure, SortedCandidateTable, SortedTableOptions,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error("trial {trial}: {source}")]
    Trial { trial: usize, source: DecodeError },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// `count` received packets with bit-flip probability `eps`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacketGroup {
    pub count: usize,
    pub eps: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoderKind {
    /// Candidate lists; undamaged packets only.
    List,
    /// Best-first search.
    Sequential,
}

fn default_state_width() -> u8 {
    64
}
fn default_message_bytes() -> usize {
    1000
}
fn default_trials() -> usize {
    1000
}
fn default_budget() -> u64 {
    crate::decode::DEFAULT_WIDTH_CAP
}
fn default_decoder() -> DecoderKind {
    DecoderKind::Sequential
}
fn default_true() -> bool {
    true
}

/// One experiment: a packet plan, a decoder and a trial count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: String,
    #[serde(rename = "N")]
    pub block_bits: u8,
    #[serde(default = "default_state_width")]
    pub state_width: u8,
    /// Received packets, by noise group; positions are drawn at random per trial.
    pub packets: Vec<PacketGroup>,
    #[serde(default = "default_message_bytes")]
    pub message_bytes: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Width cap: the decoder may pop `budget_width * L` nodes.
    #[serde(default = "default_budget")]
    pub budget_width: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_decoder")]
    pub decoder: DecoderKind,
    #[serde(default = "default_true")]
    pub use_final_state: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.trials == 0 {
            return bad("trials must be >= 1".into());
        }
        if self.message_bytes == 0 {
            return bad("message_bytes must be >= 1".into());
        }
        if self.budget_width == 0 {
            return bad("budget_width must be >= 1".into());
        }
        CodecParams::new(self.block_bits, self.state_width)
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        let m = self.received();
        if m == 0 || m > usize::from(self.state_width) {
            return bad(format!("{m} packets, need 1..={}", self.state_width));
        }
        if let Some(g) = self.packets.iter().find(|g| !(0.0..=0.5).contains(&g.eps)) {
            return bad(format!("eps {} outside [0, 0.5]", g.eps));
        }
        if self.decoder == DecoderKind::List
            && self.packets.iter().any(|g| g.eps > 0.0 && g.count > 0)
        {
            return bad("the list decoder needs undamaged packets".into());
        }
        Ok(())
    }

    /// `M`.
    pub fn received(&self) -> usize {
        self.packets.iter().map(|g| g.count).sum()
    }

    pub fn profile(&self) -> NoiseProfile {
        NoiseProfile::new(
            self.packets
                .iter()
                .flat_map(|g| std::iter::repeat_n(g.eps, g.count))
                .collect(),
        )
        .expect("validated")
    }

    /// Encoding steps per trial after zero-padding to whole blocks.
    pub fn steps(&self) -> usize {
        (self.message_bytes * 8).div_ceil(usize::from(self.block_bits))
    }

    /// Same experiment scaled down to 100 trials.
    pub fn ci(mut self) -> Self {
        self.trials = self.trials.min(100);
        self
    }

    /// Undamaged decoding with one spare packet: `M = N + 1`.
    pub fn fig4(n: u8) -> Self {
        Self {
            scenario: format!("fig4-N{n}"),
            block_bits: n,
            state_width: 64,
            packets: vec![PacketGroup {
                count: usize::from(n) + 1,
                eps: 0.0,
            }],
            message_bytes: 1000,
            trials: 1000,
            budget_width: default_budget(),
            seed: 4,
            decoder: DecoderKind::Sequential,
            use_final_state: true,
        }
    }

    /// `N - 1` undamaged packets and two with `eps = 0.05, 0.04` (`c ≈ 1`).
    pub fn fig5(n: u8) -> Self {
        Self {
            scenario: format!("fig5-N{n}"),
            packets: vec![
                PacketGroup {
                    count: usize::from(n) - 1,
                    eps: 0.0,
                },
                PacketGroup {
                    count: 1,
                    eps: 0.05,
                },
                PacketGroup {
                    count: 1,
                    eps: 0.04,
                },
            ],
            budget_width: 512,
            seed: 5,
            ..Self::fig4(n)
        }
    }

    /// `N = 3`: two undamaged packets and `d` badly damaged ones at `eps = 0.2`.
    pub fn fig6(d: usize) -> Self {
        Self {
            scenario: format!("fig6-d{d}"),
            packets: vec![
                PacketGroup { count: 2, eps: 0.0 },
                PacketGroup { count: d, eps: 0.2 },
            ],
            seed: 6,
            ..Self::fig4(3)
        }
    }

    /// Named presets: `fig4` (N = 8), `fig4-N<n>`, `fig5`, `fig5-N<n>`, `fig6-d<d>`.
    pub fn preset(name: &str) -> Option<Self> {
        let num = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse().ok());
        match name {
            "fig4" => Some(Self::fig4(8)),
            "fig5" => Some(Self::fig5(8)),
            "fig6" => Some(Self::fig6(9)),
            _ => {
                if let Some(n) = num("fig4-N").filter(|n| (1..=16).contains(n)) {
                    Some(Self::fig4(n))
                } else if let Some(n) = num("fig5-N").filter(|n| (2..=16).contains(n)) {
                    Some(Self::fig5(n))
                } else {
                    num("fig6-d").map(|d: u8| Self::fig6(usize::from(d)))
                }
            }
        }
    }
}

/// One trial's outcome.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub width: f64,
    pub success: bool,
    /// Stopped by the budget: `width` is the cap, the true width is larger.
    pub censored: bool,
    pub nodes: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub regime: ParetoResult,
    pub predicted_c: Option<f64>,
    pub success_rate: f64,
    pub mean_width: f64,
    pub median_width: f64,
    /// Fraction of trials decoded at width exactly 1.
    pub width_one_fraction: f64,
    pub fit: Option<ParetoFit>,
    pub fit_error: Option<String>,
    /// Widths in ascending order.
    pub sorted_widths: Vec<f64>,
    /// Per-trial records in trial order.
    #[serde(skip_serializing)]
    #[serde(default)]
    pub trials: Vec<TrialRecord>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl ExperimentReport {
    /// `trial,width,success,censored,nodes`, one row per trial.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "trial,width,success,censored,nodes")?;
        for t in &self.trials {
            writeln!(
                out,
                "{},{},{},{},{}",
                t.trial, t.width, t.success, t.censored, t.nodes
            )?;
        }
        Ok(())
    }

    /// Config echo, statistics and fit; identical for identical configs.
    pub fn write_json(&self, out: impl Write) -> serde_json::Result<()> {
        serde_json::to_writer_pretty(out, self)
    }
}

/// Runs every trial of `config` in parallel; the report depends only on the config.
pub fn run_width_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    config.validate()?;
    let started = Instant::now();
    let profile = config.profile();
    let regime = solve_pareto_c(&profile, config.block_bits);
    let trials: Vec<TrialRecord> = if matches!(regime, ParetoResult::BelowShannon { .. }) {
        // not enough information: nothing to search for
        (0..config.trials)
            .map(|trial| TrialRecord {
                trial,
                width: config.budget_width as f64,
                success: false,
                censored: true,
                nodes: 0,
            })
            .collect()
    } else {
        (0..config.trials)
            .into_par_iter()
            .map(|trial| run_trial(config, &profile, trial))
            .collect::<Result<_, _>>()?
    };
    Ok(summarize(config.clone(), regime, trials, started.elapsed()))
}

fn run_trial(
    config: &ExperimentConfig,
    profile: &NoiseProfile,
    trial: usize,
) -> Result<TrialRecord, HarnessError> {
    let err = |source: DecodeError| HarnessError::Trial { trial, source };
    let mut rng = RngStream::new(config.seed, trial as u64).rng();
    let params = CodecParams::new(config.block_bits, config.state_width)
        .expect("validated")
        .with_seed(rng.random());
    let table = TransitionTable::build(&params, TableMode::Random).map_err(|e| err(e.into()))?;
    let steps = config.steps();
    let mut message: BitSeq = (0..config.message_bytes * 8)
        .map(|_| rng.random_bool(0.5))
        .collect();
    message.pad_to(steps * usize::from(config.block_bits));

    // packet positions in draw order; group g takes the next `count` of them
    let m = config.received();
    let drawn: Vec<u8> = sample(&mut rng, usize::from(config.state_width), m)
        .into_iter()
        .map(|p| p as u8)
        .collect();
    let which = PacketIndexSet::from_unsorted(drawn.clone()).map_err(|e| err(e.into()))?;
    let enc = encode(&message, &params, &table).map_err(|e| err(e.into()))?;
    let mut rx = enc
        .emit_subset(std::slice::from_ref(&which))
        .map_err(|e| err(e.into()))?;
    for (&pos, &eps) in drawn.iter().zip(profile.values()) {
        corrupt_packet(&mut rx, PacketId::new(0, pos), eps, &mut rng).map_err(|e| err(e.into()))?;
    }
    let data = rx.data().map_err(|e| err(e.into()))?;
    let final_state = config.use_final_state.then(|| enc.final_state());

    match config.decoder {
        DecoderKind::List => {
            let pt = PartitionTable::build(&table, &[which]).map_err(err)?;
            let budget = ListBudget {
                max_list: (config.budget_width as usize).saturating_mul(1 << config.block_bits),
                max_messages: 1,
            };
            let res = decode_list(&data, &params, &pt, final_state, budget).map_err(err)?;
            Ok(TrialRecord {
                trial,
                width: res.width,
                success: res.status == ListStatus::Complete
                    && res.messages.first() == Some(&message),
                censored: res.status == ListStatus::BudgetExhausted,
                nodes: res.nodes,
            })
        }
        DecoderKind::Sequential => {
            let st = SortedCandidateTable::build(
                &table,
                &[which],
                &rx.profiles(),
                SortedTableOptions::default(),
            )
            .map_err(err)?;
            let budget = DecodeBudget::from_width(config.budget_width, data.substeps());
            let res = decode_sequential(&data, &params, &st, budget, final_state).map_err(err)?;
            Ok(TrialRecord {
                trial,
                width: res.width,
                success: res.success && res.message == message,
                censored: res.failure == Some(SeqFailure::BudgetExhausted),
                nodes: res.nodes,
            })
        }
    }
}

fn summarize(
    config: ExperimentConfig,
    regime: ParetoResult,
    trials: Vec<TrialRecord>,
    wall_time: Duration,
) -> ExperimentReport {
    let n = trials.len() as f64;
    let mut order: Vec<&TrialRecord> = trials.iter().collect();
    order.sort_by(|a, b| {
        a.width
            .total_cmp(&b.width)
            .then(a.censored.cmp(&b.censored))
    });
    let sorted_widths: Vec<f64> = order.iter().map(|t| t.width).collect();
    let censored: Vec<bool> = order.iter().map(|t| t.censored).collect();
    let (fit, fit_error) = match fit_pareto_tail_censored(&sorted_widths, &censored) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let mid = sorted_widths.len() / 2;
    let median_width = if sorted_widths.len() % 2 == 1 {
        sorted_widths[mid]
    } else {
        0.5 * (sorted_widths[mid - 1] + sorted_widths[mid])
    };
    ExperimentReport {
        predicted_c: regime.c(),
        regime,
        success_rate: trials.iter().filter(|t| t.success).count() as f64 / n,
        mean_width: sorted_widths.iter().sum::<f64>() / n,
        median_width,
        width_one_fraction: sorted_widths.iter().filter(|&&w| w == 1.0).count() as f64 / n,
        fit,
        fit_error,
        sorted_widths,
        trials,
        wall_time,
        config,
    }
}

/// Block sizes of the fountain code over JRC table.
pub const UNL_TABLE_ROWS: [u32; 6] = [1, 2, 3, 4, 10, 100];

/// Mean rate, spread, and the three unknown-noise-level approaches.
pub fn run_unl_study(samples: u64, seed: u64) -> UnlSummary {
    unl_summary(samples, seed, &UNL_TABLE_ROWS)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(mut c: ExperimentConfig) -> ExperimentConfig {
        c.trials = 12;
        c.message_bytes = 50;
        c
    }

    #[test]
    fn reports_are_reproducible() {
        let c = small(ExperimentConfig::fig4(4));
        let a = run_width_experiment(&c).unwrap();
        let b = run_width_experiment(&c).unwrap();
        let ja = serde_json::to_string(&a).unwrap();
        assert_eq!(ja, serde_json::to_string(&b).unwrap());
        assert_eq!(a.success_rate, 1.0);
        assert!(a.sorted_widths.windows(2).all(|w| w[0] <= w[1]));
        let mut csv = Vec::new();
        a.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 13);
    }

    #[test]
    fn list_decoder_experiment() {
        let mut c = small(ExperimentConfig::fig4(5));
        c.decoder = DecoderKind::List;
        let r = run_width_experiment(&c).unwrap();
        assert_eq!(r.success_rate, 1.0);
        assert!(r.mean_width >= 1.0);
    }

    #[test]
    fn infeasible_profile_short_circuits() {
        let mut c = small(ExperimentConfig::fig6(2));
        c.packets[1].count = 2;
        let r = run_width_experiment(&c).unwrap();
        assert!(matches!(r.regime, ParetoResult::BelowShannon { .. }));
        assert_eq!(r.success_rate, 0.0);
    }

    #[test]
    fn config_validation() {
        let mut c = ExperimentConfig::fig5(8);
        c.decoder = DecoderKind::List;
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::fig4(8);
        c.trials = 0;
        assert!(c.validate().is_err());
        assert!(ExperimentConfig::preset("fig6-d7").is_some());
        assert!(ExperimentConfig::preset("nope").is_none());
        let json = serde_json::to_string(&ExperimentConfig::fig5(8)).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ExperimentConfig::fig5(8));
    }

    #[test]
    fn minimal_config_uses_defaults() {
        let c: ExperimentConfig = serde_json::from_str(
            r#"{"scenario": "x", "N": 4, "packets": [{"count": 5, "eps": 0.0}]}"#,
        )
        .unwrap();
        assert_eq!(c.trials, 1000);
        assert_eq!(c.message_bytes, 1000);
        assert_eq!(c.decoder, DecoderKind::Sequential);
    }
}
