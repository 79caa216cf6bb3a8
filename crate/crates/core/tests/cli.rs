use std::fs;

use kpz_tails::cli::{manifest_path, run, RunConfig};

fn read_rows(path: &std::path::Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn eval_groeneboom_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.csv");
    let code = run(["kpz", "eval", "groeneboom", "--x", "5", "--rel-tol", "1e-10", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("x,value,log_value,abs_err,rel_err,nodes\n"));
    let rows = read_rows(&out);
    assert_eq!(rows.len(), 1);
    let value: f64 = rows[0][1].parse().unwrap();
    let log_value: f64 = rows[0][2].parse().unwrap();
    assert!((value.ln() - log_value).abs() < 1e-12);
    // at least 12 significant digits
    assert!(rows[0][1].split('e').next().unwrap().len() >= 14);
    let manifest = RunConfig::load(&manifest_path(&out)).unwrap();
    assert_eq!(manifest.schema_version, 1);
}

#[test]
fn bounds_fsigma_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let code = run(["kpz", "bounds", "fsigma", "--sigma", "1", "--s-grid", "15:40:1", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let rows = read_rows(&out);
    assert_eq!(rows.len(), 26);
    for r in rows {
        let (lo, up): (f64, f64) = (r[3].parse().unwrap(), r[4].parse().unwrap());
        assert!(lo <= up, "{r:?}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let out = out.to_str().unwrap();
    assert_eq!(run(["kpz", "eval", "groeneboom", "--x", "0.1", "--out", out]), 2);
    assert_eq!(run(["kpz", "bounds", "parabola", "--s-grid", "5:6:1", "--out", out]), 2);
    assert_eq!(run(["kpz", "mc", "--grid-step", "0.01", "--n", "5", "--out", out]), 2);
    assert_eq!(run(["kpz", "lpp", "--n", "64", "--reps", "1", "--memory-mib", "0", "--out", out]), 3);
    assert_eq!(run(["kpz", "eval", "gue", "--x-grid", "-2:2:1", "--out", out]), 0);
    assert_eq!(read_rows(std::path::Path::new(out)).len(), 5);
}

#[test]
fn manifest_rerun_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("m.csv");
    let b = dir.path().join("m2.csv");
    let code = run(["kpz", "mc", "--n", "500", "--grid-step", "1e-3", "--seed", "9", "--out", a.to_str().unwrap()]);
    assert_eq!(code, 0);
    let m = manifest_path(&a);
    assert_eq!(run(["kpz", "--manifest", m.to_str().unwrap(), "--out-override", b.to_str().unwrap()]), 0);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let tampered = fs::read_to_string(&m).unwrap().replace("\"seed\"", "\"sead\"");
    fs::write(&m, tampered).unwrap();
    assert_eq!(run(["kpz", "--manifest", m.to_str().unwrap()]), 2);
}
