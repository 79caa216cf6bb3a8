//! Lower and upper tail bounds for the KPZ fixed point started from a
//! two-sided Brownian motion of strength σ.

use std::time::Instant;

use kpz_tails::tail_bounds::{fsigma_lower_bound, fsigma_upper_bound};
use kpz_tails::tracy_widom::ln_gue_tail_asymptotic;

fn main() -> Result<(), kpz_tails::Error> {
    println!("{:>6} {:>6} {:>14} {:>14} {:>14} {:>7}", "sigma", "s", "ln lower", "ln upper", "ln quad", "regime");
    for sigma in [0.5, 1.0, 2.0] {
        for s in [15.0, 25.0, 40.0] {
            let lo = fsigma_lower_bound(sigma, s, false)?;
            let up = fsigma_upper_bound(sigma, s, None, None)?;
            println!(
                "{sigma:>6.2} {s:>6.1} {:>14.6} {:>14.6} {:>14} {:>7}",
                lo.lower, up.upper, "-", lo.regime_ok && up.regime_ok
            );
        }
    }
    let t = Instant::now();
    let q = fsigma_lower_bound(1.0, 8.0, true)?;
    println!(
        "sigma = 1, s = 8: closed {:.6}, quadrature {:.6}, GUE tail {:.6} ({:.1} s)",
        q.branch("closed_form").unwrap(),
        q.branch("quadrature").unwrap(),
        ln_gue_tail_asymptotic(8.0),
        t.elapsed().as_secs_f64()
    );
    Ok(())
}
