//! GUE and GOE Tracy–Widom CDFs from Fredholm determinants.

use kpz_tails::tracy_widom::{
    goe_tail_asymptotic, gue_tail_asymptotic, tw_cdf, tw_moments, Ensemble, FredholmConfig,
};

fn main() -> Result<(), kpz_tails::Error> {
    let cfg = FredholmConfig::default();
    println!("{:>6} {:>20} {:>20} {:>10} {:>20} {:>10}", "s", "F_GUE", "1-F_GUE", "tail/asym", "F_GOE", "tail/asym");
    for i in -9..=14 {
        let s = i as f64;
        let gue = tw_cdf(Ensemble::Gue, s, &cfg)?;
        let goe = tw_cdf(Ensemble::Goe, s, &cfg)?;
        let (ra, rb) = if s > 0.0 {
            (
                gue.one_minus_cdf.value / gue_tail_asymptotic(s),
                goe.one_minus_cdf.value / goe_tail_asymptotic(s),
            )
        } else {
            (f64::NAN, f64::NAN)
        };
        println!(
            "{s:>6.1} {:>20.12e} {:>20.12e} {ra:>10.5} {:>20.12e} {rb:>10.5}  {:?}",
            gue.cdf.value, gue.one_minus_cdf.value, goe.cdf.value, gue.status
        );
    }
    for e in [Ensemble::Gue, Ensemble::Goe] {
        let (m, v) = tw_moments(e, &cfg)?;
        println!("{e:?}: mean {m:.10} variance {v:.10}");
    }
    Ok(())
}
