use std::process::{Command, Output};

use serde_json::Value;

fn susyrad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_susyrad")).args(args).output().expect("binary runs")
}

fn susyrad_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_susyrad")).args(args).env(key, value).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// CSV body as rows of strings, header first.
fn csv(o: &Output) -> Vec<Vec<String>> {
    stdout(o).lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn column(rows: &[Vec<String>], name: &str) -> Vec<Option<f64>> {
    let i = rows[0].iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows[1..].iter().map(|r| r[i].parse().ok()).collect()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("valid json")
}

#[test]
fn oscillator_spectrum_table() {
    let o = susyrad(&[
        "spectrum",
        "--family",
        "quadratic",
        "--omega",
        "1",
        "--mass",
        "1",
        "--ell",
        "1",
        "--system",
        "1",
        "--levels",
        "4",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = csv(&o);
    let numeric = column(&rows, "e_plus");
    let exact = column(&rows, "analytic_plus");
    for (k, want) in [0.0, 2.0, 4.0, 6.0].iter().enumerate() {
        assert_eq!(exact[k], Some(*want));
        assert!((numeric[k].unwrap() - want).abs() < 1e-3, "{:?}", numeric[k]);
    }
}

#[test]
fn linear_spectrum_table() {
    let o = susyrad(&[
        "spectrum", "--family", "linear", "--gamma", "1", "--mass", "0.5", "--ell", "1", "--system", "1", "--levels",
        "3",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let exact = column(&csv(&o), "analytic_plus");
    for (k, want) in [0.0, 0.75, 8.0 / 9.0].iter().enumerate() {
        assert!((exact[k].unwrap() - want).abs() < 1e-15);
    }
}

#[test]
fn invalid_exponent_is_a_config_error() {
    let o = susyrad(&["spectrum", "--family", "power-law", "--gamma", "1", "--a", "-1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("`a`"), "{}", stderr(&o));
    let o = susyrad(&["spectrum", "--spec", "family=quadratic omga=1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("omga=1"));
    assert_eq!(code(&susyrad(&["spectrum", "--bogus"])), 2);
    assert_eq!(code(&susyrad(&["spectrum", "--family", "logarithmic", "--gamma", "0.5"])), 2);
}

#[test]
fn closed_form_tolerance_failure_exits_3() {
    let o = susyrad(&["spectrum", "--family", "quadratic", "--omega", "1", "--n", "200", "--tol-analytic", "1e-12"]);
    assert_eq!(code(&o), 3);
    assert!(!stdout(&o).is_empty(), "report is still written");
}

#[test]
fn potential_rows_by_direct_evaluation() {
    // Φ = ℓ/r - σU′, V± = (Φ² ± Φ′)/2m. Here Φ = 1, Φ′ = -3 at r = 1.
    let o = susyrad(&[
        "potential",
        "--family",
        "power-law",
        "--gamma",
        "1",
        "--a",
        "2",
        "--ell",
        "2",
        "--units",
        "2m1",
        "--r",
        "1",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = csv(&o);
    assert_eq!(rows[0], ["r", "v1_plus", "v1_minus", "v2_plus", "v2_minus"]);
    let v: Vec<f64> = rows[1][1..].iter().map(|x| x.parse().unwrap()).collect();
    // System 2: Φ = 3, Φ′ = -1.
    for (got, want) in v.iter().zip([-2.0, 4.0, 8.0, 10.0]) {
        assert!((got - want).abs() < 1e-14, "{got} vs {want}");
    }
}

#[test]
fn logarithmic_rows_match_closed_form() {
    let (g, ell, m) = (0.7, 2.0, 0.5);
    let o = susyrad(&[
        "potential",
        "--family",
        "logarithmic",
        "--gamma",
        "0.7",
        "--ell",
        "2",
        "--units",
        "2m1",
        "--r",
        "0.5,1,3",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = csv(&o);
    for row in &rows[1..] {
        let r: f64 = row[0].parse().unwrap();
        for (col, sigma, sign) in [(1, 1.0, 1.0), (2, 1.0, -1.0), (3, -1.0, 1.0), (4, -1.0, -1.0)] {
            let c: f64 = ell - sigma * g;
            let want = (c * c - sign * c) / (2.0 * m * r * r);
            let got: f64 = row[col].parse().unwrap();
            assert!((got - want).abs() < 1e-13 * want.abs().max(1.0), "r={r} col={col}: {got} vs {want}");
        }
    }
}

#[test]
fn steep_power_law_wall() {
    let o = susyrad(&[
        "potential",
        "--family",
        "power-law",
        "--gamma",
        "1",
        "--a",
        "30",
        "--ell",
        "2",
        "--units",
        "2m1",
        "--r",
        "1.1",
    ]);
    let v = column(&csv(&o), "v1_minus")[0].unwrap();
    assert!(v > 100.0, "{v}");
}

#[test]
fn potential_range_and_json() {
    let o = susyrad(&[
        "potential",
        "--family",
        "linear",
        "--gamma",
        "1",
        "--ell",
        "1",
        "--r-min",
        "0.5",
        "--r-max",
        "2",
        "--points",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let r: Vec<f64> = v["r"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(r, vec![0.5, 1.0, 1.5, 2.0]);
    assert_eq!(v["v1_plus"].as_array().unwrap().len(), 4);
}

#[test]
fn zero_mode_localizes_near_unit_radius() {
    let o = susyrad(&[
        "zero-mode",
        "--family",
        "power-law",
        "--gamma",
        "1",
        "--a",
        "20",
        "--ell",
        "2",
        "--units",
        "2m1",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    let peak = v["meta"]["peak_r_analytic"].as_f64().unwrap();
    assert!((0.9..=1.05).contains(&peak), "{peak}");
    let numeric = v["meta"]["peak_r_numeric"].as_f64().unwrap();
    assert!((numeric - peak).abs() < 0.01);
}

#[test]
fn zero_mode_normalization() {
    let o = susyrad(&[
        "zero-mode",
        "--family",
        "quadratic",
        "--omega",
        "1",
        "--mass",
        "1",
        "--ell",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert!((v["meta"]["integral"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!(v["meta"]["profile_deviation"].as_f64().unwrap() < 1e-3);
    let rows = csv(&susyrad(&["zero-mode", "--family", "quadratic", "--omega", "1", "--ell", "1", "--n", "400"]));
    assert_eq!(rows[0], ["r", "density_analytic", "density_numeric"]);
    assert_eq!(rows.len(), 402);
}

#[test]
fn broken_phase_has_no_zero_mode() {
    let o = susyrad(&["zero-mode", "--family", "quadratic", "--omega", "1", "--ell", "1", "--system", "2"]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("no zero mode (broken SUSY)"));
    // The roles swap for negative coupling.
    assert_eq!(code(&susyrad(&["zero-mode", "--family", "linear", "--gamma", "-1", "--ell", "1", "--system", "2"])), 0);
    assert_eq!(code(&susyrad(&["zero-mode", "--family", "linear", "--gamma", "-1", "--ell", "1", "--system", "1"])), 4);
}

#[test]
fn default_verification_passes() {
    let o = susyrad(&["verify", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["pass"], Value::Bool(true));
    let checks = v["checks"].as_array().unwrap();
    for suite in ["algebra", "spectrum", "zero-modes", "shape-invariance", "bessel", "spinor"] {
        assert!(checks.iter().any(|c| c["suite"] == suite), "missing {suite}");
    }
}

#[test]
fn bessel_suite() {
    let o = susyrad(&["verify", "--suite", "bessel", "--lmax", "10", "--format", "json"]);
    assert_eq!(code(&o), 0);
    for c in json(&o)["checks"].as_array().unwrap() {
        if c["informational"] == Value::Bool(false) {
            assert!(c["value"].as_f64().unwrap() < 1e-10, "{c}");
        }
    }
}

#[test]
fn shape_invariance_suite_and_command() {
    let o = susyrad(&["verify", "--suite", "shape-invariance", "--ell0", "1", "--gamma0", "1", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!(v["checks"][0]["value"].as_f64().unwrap() < 1e-12);

    let o = susyrad(&[
        "shape-invariance",
        "--ell0",
        "2",
        "--gamma0",
        "3/2",
        "--mass",
        "0.5",
        "--steps",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["exact"], Value::Bool(true));
    assert_eq!(v["links"][1]["gamma"], "1");
    assert_eq!(v["links"][2]["gamma"], "3/4");
    assert!(v["max_residual"].as_f64().unwrap() < 1e-12);
    assert_eq!(code(&susyrad(&["shape-invariance", "--gamma0", "abc"])), 2);
}

#[test]
fn spinor_check_passes() {
    let o = susyrad(&["spinor-check"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).lines().skip(1).all(|l| l.contains(",true,")));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = [
        "spectrum", "--family", "linear", "--gamma", "1", "--ell", "1,2,3", "--system", "1,2", "--n", "600",
        "--levels", "3", "--format", "json",
    ];
    let a = susyrad(&args);
    let b = susyrad(&args);
    let c = susyrad_env(&args, "SUSYRAD_THREADS", "1");
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert_eq!(json(&a).as_array().unwrap().len(), 6);
    assert_eq!(code(&susyrad_env(&["spinor-check"], "SUSYRAD_THREADS", "x")), 2);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# linear well\nfamily = linear\ngamma = 1\nunits = 2m1\nlevels = 3\nell = 1\n").unwrap();
    let out = dir.path().join("out.csv");
    let o =
        susyrad(&["spectrum", "--config", cfg.to_str().unwrap(), "--levels", "2", "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[2].contains("7.5000000000000000e-1"));

    std::fs::write(&cfg, "family linear\n").unwrap();
    assert_eq!(code(&susyrad(&["spectrum", "--config", cfg.to_str().unwrap()])), 2);
    assert_eq!(code(&susyrad(&["spectrum", "--config", "/nonexistent/cfg"])), 2);
}

#[test]
fn json_spectrum_schema() {
    let o = susyrad(&[
        "spectrum",
        "--family",
        "quadratic",
        "--omega",
        "1",
        "--system",
        "2",
        "--levels",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    for key in ["meta", "eigenvalues_plus", "eigenvalues_minus", "pairing", "zero_modes", "residuals"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["zero_modes"].as_array().unwrap().len(), 0);
    let plus = v["eigenvalues_plus"].as_array().unwrap();
    let minus = v["eigenvalues_minus"].as_array().unwrap();
    for (p, m) in plus.iter().zip(minus) {
        let (p, m) = (p.as_f64().unwrap(), m.as_f64().unwrap());
        assert!((p - m).abs() <= 1e-10 * p);
    }
}
