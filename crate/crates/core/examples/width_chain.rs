//! Stationary distribution of the list size for undamaged packets.

use jrc::analysis::{stationary_width_dist, StationaryMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for extra in 1..=3u8 {
        let n = 8;
        for mode in [StationaryMode::Asymptotic, StationaryMode::Exact] {
            let d = stationary_width_dist(n, n + extra, mode)?;
            let head: Vec<String> = (1..=5).map(|i| format!("{:.5}", d.p(i))).collect();
            println!(
                "M = N + {extra} ({mode:?}): p_1..5 = [{}], mean {:.4}, std {:.4}",
                head.join(", "),
                d.mean,
                d.std
            );
        }
    }
    Ok(())
}
