//! Samples max(W(t) - t²/2) and compares tail frequencies with G(x), both
//! for the half line t >= 0 and for the whole line.
//!
//! cargo run --release --example bm_parabola_mc -- [paths] [grid_step]

use std::time::Instant;

use kpz_tails::eval::AccuracyPolicy;
use kpz_tails::groeneboom::{g_tail, g_tail_two_sided, ContourSpec};
use kpz_tails::monte_carlo::{empirical_tail, sample_bm_parabola_max, RngSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(100_000);
    let h: f64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(1e-4);

    let start = Instant::now();
    let paths = sample_bm_parabola_max(0.5, n, h, None, &RngSpec::new(2024, 0))?;
    let elapsed = start.elapsed();
    let maxima: Vec<f64> = paths.iter().map(|p| p.max_value).collect();
    let right: Vec<f64> = paths.iter().map(|p| p.max_right).collect();
    let redraws: u32 = paths.iter().map(|p| p.boundary_redraws).sum();
    println!(
        "{n} paths, grid {h:e}, radius {:.2}, {redraws} boundary redraws, {:.1?}",
        paths[0].domain_radius, elapsed
    );

    let policy = AccuracyPolicy::default();
    println!("{:>5} {:>10} {:>10} {:>7} {:>10} {:>10} {:>7}", "x", "G", "MC t>=0", "z", "G(2-G)", "MC", "z");
    for x in [0.5, 1.0, 1.5, 2.0] {
        let g1 = g_tail(x, &ContourSpec::for_x(x), &policy)?.value;
        let g2 = g_tail_two_sided(x, &ContourSpec::for_x(x), &policy)?.value;
        let (p1, se1) = empirical_tail(&right, x)?;
        let (p2, se2) = empirical_tail(&maxima, x)?;
        println!(
            "{x:>5.2} {g1:>10.6} {p1:>10.6} {:>7.2} {g2:>10.6} {p2:>10.6} {:>7.2}",
            (p1 - g1) / se1,
            (p2 - g2) / se2
        );
    }
    Ok(())
}
