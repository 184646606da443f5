//! `jrc`: encode files into packets, damage them, recover them, and run the analyses.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use jrc::analysis::{
    decay_exponent, growth_exponent, rate_c, renyi_h, shannon_h, solve_pareto_c,
    stationary_width_dist, straightforward_log2_prob, straightforward_prob, StationaryMode,
    MAX_ENUMERATED_PACKETS,
};
use jrc::bits::PacketIndexSet;
use jrc::channel::{apply_bsc, NoiseProfile, RngStream};
use jrc::codec::{CodecParams, PacketId, TableMode};
use jrc::harness::{run_unl_study, run_width_experiment, ExperimentConfig};
use jrc::io::{
    encode_packets, recover, EncodeOptions, EpsilonManifest, PacketFile, PacketSet, Recovery,
    RecoveryMode, RecoveryOptions,
};

const EXIT_PARTIAL: u8 = 2;
const EXIT_BELOW_SHANNON: u8 = 3;

#[derive(Parser)]
#[command(name = "jrc", version, about = "Joint reconstruction codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a file into packet files, one per requested state bit.
    Encode(EncodeArgs),
    /// Pass a packet file through a binary symmetric channel.
    Corrupt(CorruptArgs),
    /// Recover a file from the packets listed in an epsilon manifest.
    Decode(DecodeArgs),
    /// Print analytic predictions as JSON.
    #[command(subcommand)]
    Analyze(Analyze),
    /// Run a randomized width experiment and write CSV and JSON results.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Message bits per step.
    #[arg(long = "N")]
    n: u8,
    /// Emit `k` state bits of every phase, spread evenly over the state.
    #[arg(long, conflicts_with = "which", required_unless_present = "which")]
    packets: Option<u8>,
    /// Emit these state bits of every phase (comma-separated).
    #[arg(long, value_delimiter = ',')]
    which: Option<Vec<u8>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Build the table so that these `N` state bits form a straightforward-decodable group.
    #[arg(long, value_delimiter = ',')]
    permutation_subset: Option<Vec<u8>>,
    #[arg(long, default_value_t = 1)]
    phases: u8,
    #[arg(long, default_value_t = 64)]
    state_width: u8,
    /// Zero the seed in the headers; the decoder must be given `--seed`.
    #[arg(long)]
    withhold_seed: bool,
    /// Leave the final state out of the headers.
    #[arg(long)]
    no_final_state: bool,
    /// Output directory; also receives `manifest.txt` listing every packet at eps 0.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CorruptArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DecodeArgs {
    /// Lines of `<packet file> <eps>`, paths relative to the manifest.
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long, default_value = "auto")]
    mode: RecoveryMode,
    /// Width cap for the list and sequential decoders.
    #[arg(long, default_value_t = jrc::decode::DEFAULT_WIDTH_CAP)]
    budget: u64,
    #[arg(long)]
    require_final_state: bool,
    /// Seed for packets encoded with `--withhold-seed`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    permutation_subset: Option<Vec<u8>>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Analyze {
    /// Capacity `R_0`, cutoff rate `R_1` and `R_c` of one BSC.
    Rate {
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
    /// Regime and Pareto coefficient of a noise profile.
    Pareto {
        #[arg(long = "N")]
        n: u8,
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
    },
    /// Probability that a random table is straightforward-decodable.
    Straightforward {
        #[arg(long = "N")]
        n: u8,
        #[arg(long = "M")]
        m: u8,
    },
    /// Stationary list-size distribution of the undamaged list decoder.
    Stationary {
        #[arg(long = "N")]
        n: u8,
        #[arg(long = "M")]
        m: u8,
        /// Binomial transitions instead of the Poisson limit.
        #[arg(long)]
        exact: bool,
    },
    /// Uniform-noise-level comparison of FC+FEC and JRC.
    Unl {
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    /// fig4, fig5, fig6, fig4-N<n>, fig5-N<n> or fig6-d<d>.
    #[arg(long)]
    preset: Option<String>,
    /// Scale the trial count down for quick runs.
    #[arg(long)]
    ci: bool,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Encode(a) => encode_cmd(a),
        Command::Corrupt(a) => corrupt_cmd(a),
        Command::Decode(a) => decode_cmd(a),
        Command::Analyze(a) => analyze_cmd(a),
        Command::Experiment(a) => experiment_cmd(a),
    }
}

fn index_set(positions: Vec<u8>) -> Result<PacketIndexSet> {
    PacketIndexSet::from_unsorted(positions).context("bad position list")
}

/// Adjacent state bits are nearly redundant (the state rotates by one bit per
/// substep), so `k` packets are taken evenly spaced rather than consecutive.
fn spread_positions(k: u8, width: u8) -> Result<Vec<u8>> {
    if k == 0 || k > width {
        bail!("--packets must be in 1..={width}");
    }
    Ok((0..u32::from(k))
        .map(|i| (i * u32::from(width) / u32::from(k)) as u8)
        .collect())
}

fn encode_cmd(a: EncodeArgs) -> Result<ExitCode> {
    let message = fs::read(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let params = CodecParams::interleaved(a.n, a.state_width, a.phases)?.with_seed(a.seed);
    let positions: Vec<u8> = match (a.packets, a.which) {
        (Some(k), _) => spread_positions(k, a.state_width)?,
        (None, Some(w)) => index_set(w)?.positions().to_vec(),
        (None, None) => bail!("give --packets or --which"),
    };
    let ids: Vec<PacketId> = (0..a.phases)
        .flat_map(|s| positions.iter().map(move |&p| PacketId::new(s, p)))
        .collect();
    let mode = match a.permutation_subset {
        Some(sub) => TableMode::Permutation(index_set(sub)?),
        None => TableMode::Random,
    };
    let options = EncodeOptions {
        include_final_state: !a.no_final_state,
        withhold_seed: a.withhold_seed,
    };
    let (files, final_state) = encode_packets(&message, &params, mode, &ids, options)?;
    fs::create_dir_all(&a.out)?;
    let mut manifest = EpsilonManifest::default();
    for f in &files {
        let name = PathBuf::from(format!("p{}_{:02}.jrc", f.header.phase, f.header.position));
        f.write_to(fs::File::create(a.out.join(&name))?)?;
        manifest.entries.push((name, 0.0));
    }
    fs::write(a.out.join("manifest.txt"), manifest.render(Path::new("")))?;
    println!(
        "{}",
        json!({
            "packets": files.len(),
            "steps": files.first().map_or(0, |f| f.header.steps),
            "message_bits": message.len() * 8,
            "final_state": format!("{:#018x}", final_state.value()),
        })
    );
    Ok(ExitCode::SUCCESS)
}

fn corrupt_cmd(a: CorruptArgs) -> Result<ExitCode> {
    let mut file = PacketFile::read_from(fs::File::open(&a.input)?)?;
    let stream = u64::from(file.header.phase) << 8 | u64::from(file.header.position);
    let mut rng = RngStream::new(a.seed, stream).rng();
    let before = file.payload.clone();
    file.payload = apply_bsc(&file.payload, a.eps, &mut rng)?;
    file.write_to(fs::File::create(&a.out)?)?;
    println!(
        "{}",
        json!({ "bits": before.len(), "flipped": before.hamming_distance(&file.payload) })
    );
    Ok(ExitCode::SUCCESS)
}

fn decode_cmd(a: DecodeArgs) -> Result<ExitCode> {
    let manifest = EpsilonManifest::load(&a.manifest)?;
    let mut files = Vec::with_capacity(manifest.entries.len());
    for (path, eps) in manifest.entries {
        let f = PacketFile::read_from(
            fs::File::open(&path).with_context(|| format!("opening {}", path.display()))?,
        )
        .with_context(|| format!("reading {}", path.display()))?;
        files.push((f, eps));
    }
    let set = PacketSet::assemble(files)?;
    let options = RecoveryOptions {
        mode: a.mode,
        budget_width: a.budget,
        require_final_state: a.require_final_state,
        seed: a.seed,
        permutation_subset: a.permutation_subset.map(index_set).transpose()?,
    };
    match recover(&set, &options)? {
        Recovery::Decoded {
            message,
            method,
            width,
        } => {
            fs::write(&a.out, &message)?;
            println!(
                "{}",
                json!({ "status": "decoded", "method": method, "width": width, "bytes": message.len() })
            );
            Ok(ExitCode::SUCCESS)
        }
        Recovery::Partial {
            prefix,
            reached_bits,
            method,
            width,
        } => {
            fs::write(&a.out, &prefix)?;
            println!(
                "{}",
                json!({ "status": "budget_exhausted", "method": method, "width": width, "reached_bits": reached_bits })
            );
            eprintln!(
                "budget exhausted after {reached_bits} of {} message bits",
                set.message_bits()
            );
            Ok(ExitCode::from(EXIT_PARTIAL))
        }
        Recovery::InsufficientRate { capacity, deficit } => {
            println!(
                "{}",
                json!({ "status": "below_shannon", "capacity": capacity, "deficit": deficit })
            );
            eprintln!("packets carry {capacity:.4} bits per step; {deficit:.4} more needed: wait for more packets");
            Ok(ExitCode::from(EXIT_BELOW_SHANNON))
        }
    }
}

fn analyze_cmd(a: Analyze) -> Result<ExitCode> {
    let out = match a {
        Analyze::Rate { eps, c } => {
            if !(0.0..=0.5).contains(&eps) || c < 0.0 {
                bail!("need eps in [0, 0.5] and c >= 0");
            }
            json!({
                "eps": eps,
                "r0": 1.0 - shannon_h(eps),
                "cutoff_rate": 1.0 - renyi_h(0.5, eps),
                "c": c,
                "rate_c": rate_c(c, eps),
            })
        }
        Analyze::Pareto { n, eps } => {
            let profile = NoiseProfile::new(eps)?;
            let regime = solve_pareto_c(&profile, n);
            let mut v = serde_json::to_value(regime)?;
            if profile.len() <= MAX_ENUMERATED_PACKETS {
                v["u"] = json!(growth_exponent(&profile, n)?);
                v["v"] = json!(decay_exponent(&profile, n)?);
            }
            v
        }
        Analyze::Straightforward { n, m } => {
            if n == 0 || m < n || m > 64 {
                bail!("need 1 <= N <= M <= 64");
            }
            json!({ "N": n, "M": m, "prob": straightforward_prob(n, m), "log2_prob": straightforward_log2_prob(n, m) })
        }
        Analyze::Stationary { n, m, exact } => {
            let mode = if exact {
                StationaryMode::Exact
            } else {
                StationaryMode::Asymptotic
            };
            serde_json::to_value(stationary_width_dist(n, m, mode)?)?
        }
        Analyze::Unl { samples, seed } => serde_json::to_value(run_unl_study(samples, seed))?,
    };
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(ExitCode::SUCCESS)
}

fn experiment_cmd(a: ExperimentArgs) -> Result<ExitCode> {
    let mut config: ExperimentConfig = match (a.config, a.preset) {
        (Some(path), _) => serde_json::from_str(&fs::read_to_string(&path)?)
            .with_context(|| format!("parsing {}", path.display()))?,
        (None, Some(name)) => {
            ExperimentConfig::preset(&name).with_context(|| format!("unknown preset {name:?}"))?
        }
        (None, None) => bail!("give --config or --preset"),
    };
    if a.ci {
        config = config.ci();
    }
    let report = run_width_experiment(&config)?;
    fs::create_dir_all(&a.out)?;
    report.write_csv(fs::File::create(a.out.join("widths.csv"))?)?;
    report.write_json(fs::File::create(a.out.join("summary.json"))?)?;
    println!(
        "{}",
        json!({
            "scenario": config.scenario,
            "success_rate": report.success_rate,
            "mean_width": report.mean_width,
            "median_width": report.median_width,
            "predicted_c": report.predicted_c,
            "c_hat": report.fit.as_ref().map(|f| f.c_hat),
        })
    );
    Ok(ExitCode::SUCCESS)
}
