//! Upper bounds on P(sup_t (A₂(t) - c t²) > s) and the branches behind them.

use kpz_tails::tail_bounds::airy_parabola_upper_bound;

fn main() -> kpz_tails::Result<()> {
    println!(
        "{:>5} {:>5} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "c", "s", "GUE tail", "direct sum", "series", "closed", "regime"
    );
    for c in [0.25, 0.5, 0.9] {
        for s in [4.0, 8.0, 16.0] {
            let r = airy_parabola_upper_bound(c, s, None)?;
            println!(
                "{c:>5} {s:>5} {:>12.4} {:>12.4} {:>12.4} {:>12.4} {:>12}",
                r.lower,
                r.branch("partition_sum").unwrap(),
                r.branch("proof_series").unwrap(),
                r.upper,
                r.regime_ok
            );
        }
    }
    println!("all columns are natural logs");
    Ok(())
}
