//! Airy and Scorer functions on a few complex arguments, including points
//! where Hi overflows and only its scaled form or log-modulus is usable.

use kpz_tails::eval::AccuracyPolicy;
use kpz_tails::special_functions::{airy_ai, scorer_hi, scorer_hi_parts, scorer_hi_scaled};
use num_complex::Complex64;

fn main() -> kpz_tails::Result<()> {
    let p = AccuracyPolicy::default();
    println!("{:>8} {:>36} {:>36}", "z", "Ai(z)", "Hi(z)");
    for (re, im) in [(0.0, 0.0), (1.0, 0.0), (-3.0, 0.0), (2.0, 1.0), (1.0, 10.0), (-8.0, 4.0)] {
        let z = Complex64::new(re, im);
        let ai = airy_ai(z, &p)?.value;
        let hi = scorer_hi(z, &p)?.value;
        println!("{:>8} {:>36} {:>36}", format!("{re}{im:+}i"), format!("{ai:.12e}"), format!("{hi:.12e}"));
    }
    // Hi grows like exp(2/3 z^{3/2}) along the positive axis
    for r in [50.0, 700.0] {
        let z = Complex64::new(r, 0.0);
        let scaled = scorer_hi_scaled(z, &p)?.value;
        let parts = scorer_hi_parts(z, &p)?;
        println!("Hi({r}) = exp({:.6}), scaled {:.14}", parts.ln_abs(), scaled.re);
    }
    Ok(())
}
