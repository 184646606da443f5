//! Uniform noise levels: fixed-code FEC against joint reconstruction.

use jrc::harness::run_unl_study;

fn main() {
    let samples = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200_000);
    let s = run_unl_study(samples, 1);
    println!("mean rate {:.5}, sigma {:.5}", s.mean_rate, s.sigma);
    println!(
        "FC+FEC optimum: rate {:.5} at eps {:.5}",
        s.fcfec_rate, s.fcfec_eps
    );
    println!("p_r(N=2, M):");
    for e in &s.pr_table {
        println!("  M={:>2}  {:.4} ± {:.4}", e.m, e.p, e.stderr);
    }
    println!("FC+JRC optimum per N:");
    for r in &s.fcjrc {
        println!(
            "  N={:>3}  M*={:>4}  p_r {:.4}  rate {:.4}",
            r.n, r.m, r.p_r, r.rate
        );
    }
}
