//! Acceptance criteria, one test each. Every test prints a single
//! `criterion N: PASS|FAIL ...` line before asserting.
//!
//! The LPP criterion takes about fifteen minutes on one core and is ignored by
//! default: `cargo test --release --test acceptance -- --ignored`.

use kpz_tails::cli;
use kpz_tails::monte_carlo::{simulate_lpp_height, LppConfig, RngSpec};
use kpz_tails::verify::{self, GroeneboomForm};

fn report(n: u32, ok: bool, detail: String) {
    println!("criterion {n}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

#[test]
fn criterion_01_groeneboom_vs_monte_carlo() {
    let rows = verify::mc_groeneboom_comparison(1_000_000, 1e-4, 20_240_601, &[0.5, 1.0, 1.5, 2.0]).unwrap();
    let mut ok = true;
    let mut detail = String::from("(n = 1e6, grid 1e-4, max over t >= 0)");
    for (x, g, p, se) in rows {
        let z = (p - g).abs() / se;
        ok &= z <= 3.0;
        detail += &format!(" x={x}: G={g:.6} mc={p:.6} z={z:.2};");
    }
    report(1, ok, detail);
}

#[test]
fn criterion_02_groeneboom_asymptotics() {
    let mut ok = true;
    let mut detail = String::new();
    for (form, name) in [
        (GroeneboomForm::Tail, "G"),
        (GroeneboomForm::Derivative, "-G'"),
        (GroeneboomForm::Density, "f_1"),
    ] {
        let devs = verify::groeneboom_asymptotic_deviation(form).unwrap();
        let (k, decreasing) = verify::summarize_deviation(&devs);
        ok &= decreasing && k <= 5.0;
        detail += &format!(" {name}: K={k:.4} decreasing={decreasing} devs=[");
        for (_, d) in &devs {
            detail += &format!("{d:.3e} ");
        }
        detail += "];";
    }
    report(2, ok, detail);
}

#[test]
fn criterion_03_hi_suite() {
    let excess = verify::hi_modulus_excess(10_000, 3).unwrap();
    let k = verify::hi_asymptotic_constant().unwrap();
    report(
        3,
        excess <= 1e-10 && k <= 5.0,
        format!("modulus bound max excess over 1e4 samples {excess:.3e} (slack 1e-10); fitted K = {k:.4e} (<= 5)"),
    );
}

#[test]
fn criterion_04_tracy_widom_tails() {
    let [g6, g7, o7] = verify::tw_tail_deviations().unwrap();
    let doubling = verify::tw_node_doubling_change().unwrap();
    let ok = g6 <= 0.15 && g7 < g6 && o7 <= 0.20 && doubling < 1e-8;
    report(
        4,
        ok,
        format!("GUE rel dev s=6 {g6:.4}, s=7 {g7:.4}; GOE rel dev x=7 {o7:.4}; node doubling {doubling:.2e}"),
    );
}

#[test]
fn criterion_05_fsigma_exponent() {
    let mut ok = true;
    let mut detail = String::new();
    for sigma in [0.5, 1.0, 2.0] {
        let fit = verify::fsigma_exponent_fit(sigma).unwrap();
        ok &= fit.lower_rel_dev() <= 0.03 && fit.upper_rel_dev() <= 0.03 && fit.ordered;
        detail += &format!(
            " sigma={sigma}: target {:.5} lower {:.5} upper {:.5} ordered={};",
            fit.target, fit.lower, fit.upper, fit.ordered
        );
    }
    report(5, ok, detail);
}

#[test]
fn criterion_06_geometric_sum() {
    let bad = verify::geometric_grid_violations().unwrap();
    let (_, d) = kpz_tails::tail_bounds::geometric_exp_sum_bound(2.0, 1.0).unwrap();
    report(
        6,
        bad == 0 && (d - 0.52187).abs() <= 1e-5,
        format!("violations on 50x50 grid: {bad}; direct sum at (2, 1) = {d:.7}"),
    );
}

#[test]
fn criterion_07_brownian_scaling() {
    let p = verify::mc_scaling_min_p(100_000, 1e-4, 7).unwrap();
    report(7, p >= 0.01, format!("smallest pairwise KS p-value over c in {{1/2, 1, 2}}, n = 1e5 each: {p:.4}"));
}

#[test]
#[ignore = "slow: about fifteen minutes of lattice sweeps"]
fn criterion_08_flat_lpp() {
    let cfg = LppConfig::new(2000, 0.0, 10_000);
    let dist = simulate_lpp_height(&cfg, &RngSpec::new(8, 0)).unwrap();
    let d = dist.ks_distance(|x| cli::lpp_flat_limit_cdf(x).unwrap());
    report(
        8,
        d <= 0.08,
        format!("KS distance to F_GOE(2^(2/3) x) = {d:.4} (n = 2000, 1e4 replicates, mean {:.4})", dist.mean()),
    );
}

#[test]
fn criterion_09_profile_shift() {
    let mut ok = true;
    let mut detail = String::new();
    for delta in [0.75, -1.25] {
        for (name, gap, ordered) in verify::profile_shift_check(delta).unwrap() {
            ok &= gap <= 1e-12 && ordered;
            detail += &format!(" {name}(delta={delta}): gap {gap:.1e} ordered={ordered};");
        }
    }
    report(9, ok, detail);
}

#[test]
fn criterion_10_manifest_reproducibility() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("v.csv");
    let second = dir.path().join("v2.csv");
    let code = cli::run(["kpz", "verify", "--suite", "all", "--seed", "42", "--out", first.to_str().unwrap()]);
    let manifest = cli::manifest_path(&first);
    let rerun = cli::run([
        "kpz",
        "--manifest",
        manifest.to_str().unwrap(),
        "--out-override",
        second.to_str().unwrap(),
    ]);
    let a = std::fs::read(&first).unwrap();
    let b = std::fs::read(&second).unwrap();
    report(
        10,
        code == 0 && rerun == 0 && a == b,
        format!("exit codes {code}/{rerun}; {} bytes, identical = {}", a.len(), a == b),
    );
}
