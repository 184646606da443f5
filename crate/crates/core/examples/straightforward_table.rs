//! Probability that a random table is decodable by lookup alone, for a grid of N and M.

use jrc::analysis::{straightforward_log2_prob, straightforward_prob};

fn main() {
    print!("{:>4}", "M\\N");
    for n in 1..=8 {
        print!("{n:>12}");
    }
    println!();
    for m in 1..=12u8 {
        print!("{m:>4}");
        for n in 1..=8u8 {
            if m < n {
                print!("{:>12}", "-");
            } else if straightforward_prob(n, m) > 1e-4 {
                print!("{:>12.5}", straightforward_prob(n, m));
            } else {
                print!(
                    "{:>12}",
                    format!("2^{:.1}", straightforward_log2_prob(n, m))
                );
            }
        }
        println!();
    }
}
