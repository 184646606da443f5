//! A scaled-down width experiment: sorted widths, success rate and tail fit.

use jrc::harness::{run_width_experiment, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "fig5-N6".into());
    let mut config = ExperimentConfig::preset(&name).ok_or("unknown preset")?;
    config.trials = 100;
    let report = run_width_experiment(&config)?;
    println!(
        "{} ({} trials, {:.1?})",
        config.scenario, config.trials, report.wall_time
    );
    println!("regime {:?}", report.regime);
    println!(
        "success {:.3}, mean width {:.3}, median {:.3}",
        report.success_rate, report.mean_width, report.median_width
    );
    match &report.fit {
        Some(f) => println!("tail fit c_hat {:.3} over {:?}", f.c_hat, f.range),
        None => println!("no fit: {}", report.fit_error.as_deref().unwrap_or("")),
    }
    let w = &report.sorted_widths;
    for q in [0.1, 0.5, 0.9, 0.99] {
        println!("  q{:<4} {:.3}", q, w[((w.len() - 1) as f64 * q) as usize]);
    }
    Ok(())
}
