//! Tail bounds for the bundled deterministic initial profiles.

use kpz_tails::tail_bounds::{deterministic_profile_bounds, shipped_profiles};

fn main() -> kpz_tails::Result<()> {
    for (name, profile) in shipped_profiles() {
        let (rep, an) = deterministic_profile_bounds(&profile, 10.0)?;
        let (sh, _) = deterministic_profile_bounds(&profile.shifted(1.0), 11.0)?;
        println!(
            "{name:>14}: kappa {:.4} at t = {:+.3}, M = {:.3}; ln bounds at s = 10: [{:.4}, {:.4}]; shifted by 1: [{:.4}, {:.4}]",
            an.kappa, an.tau, an.m, rep.lower, rep.upper, sh.lower, sh.upper
        );
    }
    Ok(())
}
