//! Tail of the maximum of Brownian motion minus a parabola.
//!
//! Prints `G(x)`, `-G'(x)` and the leading asymptotics on a grid.

use std::time::Instant;

use kpz_tails::groeneboom::{g_asymptotic, g_tail, g_tail_derivative, ContourSpec};
use kpz_tails::AccuracyPolicy;

fn main() -> Result<(), kpz_tails::Error> {
    let policy = AccuracyPolicy::with_rel_tol(1e-10);
    println!("{:>5} {:>22} {:>22} {:>10} {:>8} {:>8}", "x", "G(x)", "-G'(x)", "G/asym", "nodes", "ms");
    for x in [0.3, 0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 12.0, 20.0] {
        let t = Instant::now();
        let contour = ContourSpec::for_x(x);
        let g = g_tail(x, &contour, &policy)?;
        let d = g_tail_derivative(x, &contour, &policy)?;
        let ms = t.elapsed().as_secs_f64() * 1e3;
        println!(
            "{x:>5.1} {:>22.14e} {:>22.14e} {:>10.6} {:>8} {:>8.1}",
            g.value,
            d.value,
            (g.log_value - g_asymptotic(x).ln()).exp(),
            g.nodes_used + d.nodes_used,
            ms
        );
    }
    Ok(())
}
