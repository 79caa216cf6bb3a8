use kpz_tails::eval::AccuracyPolicy;
use kpz_tails::groeneboom::{g_tail, g_tail_two_sided, ContourSpec};
use kpz_tails::monte_carlo::{sample_bm_parabola_max, EmpiricalDistribution, RngSpec};
use kpz_tails::special_functions::{airy_ai, scorer_hi, scorer_hi_scaled, zeta};
use kpz_tails::tail_bounds::{self, ProfileSpec};
use kpz_tails::tracy_widom::{tw_cdf, Ensemble, FredholmConfig};
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn airy_and_hi_conjugate_symmetric(re in -8.0f64..8.0, im in 0.01f64..15.0) {
        let p = AccuracyPolicy::default();
        let z = Complex64::new(re, im);
        let a = airy_ai(z, &p).unwrap().value;
        let b = airy_ai(z.conj(), &p).unwrap().value;
        prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm());
        let h = scorer_hi(z, &p).unwrap().value;
        let g = scorer_hi(z.conj(), &p).unwrap().value;
        prop_assert!((h - g.conj()).norm() <= 1e-12 * h.norm());
    }

    #[test]
    fn hi_scaled_matches_unscaled(r in 0.5f64..20.0, arg in -1.0f64..1.0) {
        let p = AccuracyPolicy::default();
        let z = Complex64::from_polar(r, arg);
        let scaled = scorer_hi_scaled(z, &p).unwrap().value * zeta(z).exp();
        let plain = scorer_hi(z, &p).unwrap().value;
        prop_assert!((scaled - plain).norm() <= 1e-11 * plain.norm());
    }

    #[test]
    fn geometric_sum_below_bound(alpha in 1.01f64..20.0, beta in 0.01f64..40.0) {
        let (bound, direct) = tail_bounds::geometric_exp_sum_bound(alpha, beta).unwrap();
        prop_assert!(direct <= bound);
    }

    #[test]
    fn fsigma_sandwich(sigma in 0.5f64..2.0, s in 15.0f64..40.0) {
        let lo = tail_bounds::fsigma_lower_bound(sigma, s, false).unwrap();
        let up = tail_bounds::fsigma_upper_bound(sigma, s, None, None).unwrap();
        prop_assert!(lo.lower <= up.upper);
    }

    #[test]
    fn parabola_bound_above_gue_tail(c in 0.05f64..0.95, s in 4.0f64..30.0) {
        let r = tail_bounds::airy_parabola_upper_bound(c, s, None).unwrap();
        prop_assert!(r.lower <= r.upper);
        prop_assert!(r.branch("partition_sum").unwrap() <= r.branch("proof_series").unwrap() + 1e-12);
    }

    #[test]
    fn empirical_cdf_and_ks(xs in prop::collection::vec(-5.0f64..5.0, 1..200)) {
        let d = EmpiricalDistribution::new(xs.clone()).unwrap();
        prop_assert!(d.samples().windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(d.cdf(5.0), 1.0);
        let (stat, p) = d.ks_two_sample(&d);
        prop_assert_eq!(stat, 0.0);
        prop_assert_eq!(p, 1.0);
        let ks = d.ks_distance(|x| ((x + 5.0) / 10.0).clamp(0.0, 1.0));
        prop_assert!((0.0..=1.0).contains(&ks) && ks >= 0.5 / xs.len() as f64 - 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn groeneboom_tail_nonincreasing(x in 0.3f64..8.0, dx in 0.01f64..2.0) {
        let p = AccuracyPolicy::default();
        let a = g_tail(x, &ContourSpec::for_x(x), &p).unwrap();
        let b = g_tail(x + dx, &ContourSpec::for_x(x + dx), &p).unwrap();
        prop_assert!((0.0..=1.0).contains(&a.value) && b.value <= a.value + a.abs_err_est);
        let two = g_tail_two_sided(x, &ContourSpec::for_x(x), &p).unwrap();
        prop_assert!(two.value >= a.value && two.value <= 2.0 * a.value);
    }

    #[test]
    fn groeneboom_contour_offset_invariance(x in 0.5f64..6.0, shift in -0.15f64..0.6) {
        let p = AccuracyPolicy::default();
        let base = ContourSpec::for_x(x);
        let moved = ContourSpec::with_offset(x, (base.offset + shift).max(0.05));
        let a = g_tail(x, &base, &p).unwrap().value;
        let b = g_tail(x, &moved, &p).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-9 * a);
    }

    #[test]
    fn tracy_widom_cdf_monotone(s in -7.0f64..7.0, ds in 0.05f64..2.0) {
        let cfg = FredholmConfig::default();
        for e in [Ensemble::Gue, Ensemble::Goe] {
            let a = tw_cdf(e, s, &cfg).unwrap();
            let b = tw_cdf(e, s + ds, &cfg).unwrap();
            prop_assert!(a.cdf.value <= b.cdf.value);
            prop_assert!((a.cdf.value + a.one_minus_cdf.value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn profile_shift_is_exact(delta in -3.0f64..3.0, extra in 6.0f64..20.0) {
        let (_, p) = tail_bounds::shipped_profiles().remove(1);
        let kappa = tail_bounds::compute_kappa(&p).unwrap().kappa;
        let q: ProfileSpec = p.shifted(delta);
        let (a, an) = tail_bounds::deterministic_profile_bounds(&p, kappa + extra).unwrap();
        let (b, bn) = tail_bounds::deterministic_profile_bounds(&q, kappa + extra + delta).unwrap();
        prop_assert!((bn.kappa - an.kappa - delta).abs() <= 1e-12 * (1.0 + an.kappa.abs()));
        prop_assert!((a.upper - b.upper).abs() <= 1e-9 * a.upper.abs());
        prop_assert!((a.lower - b.lower).abs() <= 1e-9 * a.lower.abs());
    }

    #[test]
    fn sampler_prefix_is_stable(seed in any::<u64>(), n in 2usize..40) {
        let rng = RngSpec::new(seed, 3);
        let long = sample_bm_parabola_max(1.0, n, 1e-3, None, &rng).unwrap();
        let short = sample_bm_parabola_max(1.0, n / 2, 1e-3, None, &rng).unwrap();
        prop_assert_eq!(&long[..n / 2], &short[..]);
        prop_assert!(long.iter().all(|s| s.max_value >= 0.0 && s.max_value == s.max_right.max(s.max_left)));
    }
}
