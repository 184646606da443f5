//! Regime, Pareto coefficient and growth/decay exponents of a few noise profiles.

use jrc::analysis::{decay_exponent, growth_exponent, rate_c, solve_pareto_c};
use jrc::channel::NoiseProfile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "R_0(0.110) = {:.4}, R_0(0.295) = {:.4}",
        rate_c(0.0, 0.110),
        rate_c(0.0, 0.295)
    );
    println!(
        "R_1(0.05) + R_1(0.04) = {:.4}",
        rate_c(1.0, 0.05) + rate_c(1.0, 0.04)
    );
    let cases: Vec<(u8, Vec<f64>)> = vec![
        (5, vec![0.0, 0.0, 0.0, 0.0, 0.05, 0.04]),
        (8, [vec![0.0; 7], vec![0.05, 0.04]].concat()),
        (3, [vec![0.0; 2], vec![0.2; 8]].concat()),
        (3, vec![0.0, 0.0, 0.2, 0.2]),
        (3, vec![0.0; 4]),
    ];
    for (n, eps) in cases {
        let profile = NoiseProfile::new(eps)?;
        let regime = solve_pareto_c(&profile, n);
        let u = growth_exponent(&profile, n)?;
        let v = decay_exponent(&profile, n)?;
        println!("N={n} {:?}: {regime:?}, u={u:?}, v={v:?}", profile.values());
    }
    Ok(())
}
