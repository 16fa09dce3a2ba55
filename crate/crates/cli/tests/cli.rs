use std::process::{Command, Output};

fn fracpsi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracpsi")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn single_value(o: &Output) -> f64 {
    let text = stdout(o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,value,err_est"));
    lines.next().unwrap().split(',').nth(1).unwrap().parse().unwrap()
}

#[test]
fn integral_of_one() {
    let o = fracpsi(&["eval", "--op", "integral", "--alpha", "0.5", "--psi", "identity", "--a", "0", "--b", "1", "--f", "1", "--x", "1"]);
    assert!(o.status.success());
    assert!((single_value(&o) - 1.1283791670955126).abs() < 1e-6);
}

#[test]
fn caputo_type_hilfer_of_constant_vanishes() {
    let o = fracpsi(&["eval", "--op", "hilfer", "--alpha", "0.5", "--beta", "1", "--psi", "identity", "--a", "0", "--b", "1", "--f", "1", "--x", "0.7"]);
    assert!(o.status.success());
    assert!(single_value(&o).abs() < 1e-8);
}

#[test]
fn csv_rows_use_seventeen_digits_and_grid_excludes_a() {
    let o = fracpsi(&["eval", "--op", "rl", "--alpha", "0.3", "--psi", "log", "--a", "1", "--b", "2", "--f", "x^2", "--grid", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("1.2500000000000000e0,"));
    assert!(rows[3].starts_with("2.0000000000000000e0,"));
    for r in rows {
        for field in r.split(',') {
            let mantissa = field.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.replace('.', "").len(), 17, "{field}");
        }
    }
}

#[test]
fn output_is_deterministic() {
    let dir = std::env::temp_dir().join(format!("fracpsi-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (p1, p2) = (dir.join("a.json"), dir.join("b.json"));
    for p in [&p1, &p2] {
        let o = fracpsi(&[
            "eval", "--op", "hilfer", "--alpha", "0.6", "--beta", "0.4", "--psi", "pow:2", "--a", "1", "--b", "2",
            "--f", "sin(x)", "--grid", "16", "--format", "json", "--out", p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    let (a, b) = (std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    assert_eq!(a, b);
    let doc: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(doc["inputs"]["op"], "hilfer");
    assert_eq!(doc["results"].as_array().unwrap().len(), 16);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["eval", "--op", "bogus", "--alpha", "1", "--a", "0", "--b", "1", "--f", "1", "--x", "1"],
        vec!["eval", "--op", "integral", "--alpha", "0.5", "--a", "1", "--b", "0", "--f", "1", "--x", "0.5"],
        vec!["eval", "--op", "integral", "--alpha", "0.5", "--a", "0", "--b", "1", "--f", "1", "--grid", "1"],
        vec!["eval", "--op", "integral", "--alpha", "0.5", "--a", "0", "--b", "1", "--f", "1", "--x", "0.5", "--grid", "3"],
        vec!["eval", "--op", "integral", "--alpha", "0.5", "--a", "0", "--b", "1", "--f", "sin(", "--x", "0.5"],
        vec!["eval", "--op", "integral", "--alpha", "0.5", "--a", "0", "--b", "1", "--f", "1", "--x", "2"],
        vec!["verify", "--suite", "nope"],
        vec!["catalog", "--name", "nope", "--alpha", "0.5", "--f", "1", "--a", "0", "--b", "1", "--x", "0.5"],
    ] {
        let o = fracpsi(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn numeric_failures_exit_three() {
    let o = fracpsi(&["eval", "--op", "integral", "--alpha", "0.5", "--a", "0", "--b", "1", "--f", "ln(x - 2)", "--x", "0.5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ln"));
}

#[test]
fn verify_power_suite_passes() {
    let o = fracpsi(&["verify", "--suite", "power", "--tol", "1e-6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("power: 135 cases, 0 failed"));
}

#[test]
fn verify_reports_failures_with_exit_one() {
    // No computation meets a tolerance this strict.
    let o = fracpsi(&["verify", "--suite", "catalog", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn catalog_preset_evaluates() {
    let o = fracpsi(&["catalog", "--name", "hadamard", "--alpha", "1", "--f", "1", "--a", "1", "--b", "3", "--x", "2"]);
    assert!(o.status.success());
    assert!((single_value(&o) - 2f64.ln()).abs() < 1e-10);
    let o = fracpsi(&["catalog", "--name", "weyl", "--kind", "derivative", "--alpha", "0.4", "--f", "exp(-t)", "--x", "0.5"]);
    assert!(o.status.success());
    assert!((single_value(&o) - (-0.5f64).exp()).abs() < 1e-6);
    let o = fracpsi(&["catalog", "--list"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("erdelyi_kober"));
}

#[test]
fn converge_shows_second_order() {
    let o = fracpsi(&["converge", "--op", "integral", "--alpha", "0.5", "--f", "exp(x)", "--a", "0", "--b", "1", "--x", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    let order: f64 = last.split(',').nth(4).unwrap().parse().unwrap();
    assert!(order > 1.9, "{text}");
}

#[test]
fn list_names_suites() {
    let o = fracpsi(&["list"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("suites: power, ml, semigroup, inversion, bounds, catalog, all"));
}
