//! Flat point-to-line exponential LPP against the GOE Tracy–Widom law.
//!
//! cargo run --release --example lpp_flat -- [n] [replicates] [sigma]

use std::time::Instant;

use kpz_tails::cli::lpp_flat_limit_cdf;
use kpz_tails::monte_carlo::{simulate_lpp_height, LppConfig, RngSpec};
use kpz_tails::tracy_widom::{tw_moments, Ensemble, FredholmConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(400);
    let reps: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(1000);
    let sigma: f64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(0.0);

    let t = Instant::now();
    let cfg = LppConfig::new(n, sigma, reps);
    let dist = simulate_lpp_height(&cfg, &RngSpec::new(1, 0))?;
    println!("n = {n}, band half-width {}, {reps} replicates in {:.1?}", cfg.half_band(), t.elapsed());

    // rescaled height X ~ 2^{-2/3} TW_GOE
    let (m, v) = tw_moments(Ensemble::Goe, &FredholmConfig::default())?;
    let k = 2f64.powf(-2.0 / 3.0);
    println!("mean {:.4} (limit {:.4}), variance {:.4} (limit {:.4})", dist.mean(), k * m, dist.variance(), k * k * v);
    if sigma == 0.0 {
        let d = dist.ks_distance(|x| lpp_flat_limit_cdf(x).unwrap_or(f64::NAN));
        println!("KS distance to F_GOE(2^(2/3) x): {d:.4}");
    }
    Ok(())
}
