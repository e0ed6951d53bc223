//! End-to-end checks of the `asymloss` binary: exit codes, file formats,
//! and byte-for-byte determinism.

use std::io::Write;
use std::process::{Command, Output};

use asymloss::gnd::GndParams;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_asymloss"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn correct_reports_the_laplace_shift() {
    let out = run(&["correct", "--a", "1", "--b", "1", "--k1", "1", "--k2", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let c: f64 = text
        .lines()
        .find(|l| l.starts_with("C: "))
        .unwrap()
        .trim_start_matches("C: ")
        .parse()
        .unwrap();
    assert!((c - std::f64::consts::LN_2).abs() < 1e-10);
}

#[test]
fn correct_symmetric_slopes_yield_zero_shift() {
    let out = run(&["correct", "--a", "1", "--b", "1", "--k1", "5", "--k2", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("C: 0\n"));
    assert!(text.contains("reduction_ratio: 1\n"));
}

#[test]
fn correct_json_is_parsable_and_carries_spec_fields() {
    let out = run(&[
        "correct", "--a", "0.5", "--b", "2", "--k1", "1", "--k2", "3", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for field in [
        "a",
        "b",
        "k1",
        "k2",
        "C",
        "x_star",
        "expected_loss_at_0",
        "expected_loss_at_C",
        "variance_at_0",
        "variance_at_C",
        "reduction_ratio",
        "warnings",
    ] {
        assert!(parsed.get(field).is_some(), "missing field {field}");
    }
    // a = 1/2, b = 2: C = 2 erf_inv(1/2)
    let c = parsed["C"].as_f64().unwrap();
    assert!((c - 0.95387255240893975).abs() < 1e-10);
}

#[test]
fn correct_applies_to_prediction_file() {
    let dir = tempfile::tempdir().unwrap();
    let preds = dir.path().join("preds.csv");
    std::fs::write(&preds, "prediction\n100.0\n200.0\n").unwrap();
    let out_path = dir.path().join("corrected.csv");
    let out = run(&[
        "correct",
        "--a",
        "1",
        "--b",
        "1",
        "--k1",
        "1",
        "--k2",
        "3",
        "--apply",
        preds.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read_to_string(&out_path).unwrap();
    let mut lines = written.lines();
    assert_eq!(lines.next().unwrap(), "prediction,corrected");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "100.0");
    let corrected: f64 = row[1].parse().unwrap();
    assert!((corrected - (100.0 + std::f64::consts::LN_2)).abs() < 1e-9);
}

#[test]
fn malformed_prediction_file_exits_2_naming_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let preds = dir.path().join("preds.csv");
    std::fs::write(&preds, "prediction\n100.0\nbogus\n").unwrap();
    let out_path = dir.path().join("corrected.csv");
    let out = run(&[
        "correct",
        "--a",
        "1",
        "--b",
        "1",
        "--k1",
        "1",
        "--k2",
        "3",
        "--apply",
        preds.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("line 3"), "stderr: {err}");
    assert!(err.contains("bogus"));
}

#[test]
fn fit_recovers_synthetic_laplace_and_correct_chains_from_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let residuals = dir.path().join("laplace.csv");
    let sample = GndParams::new(1.0, 1.0).unwrap().sample(400_000, 4242);
    let mut file = std::fs::File::create(&residuals).unwrap();
    writeln!(file, "residual").unwrap();
    for z in &sample {
        writeln!(file, "{z}").unwrap();
    }
    drop(file);

    let out = run(&["fit", "--residuals", residuals.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let a_hat = parsed["a_hat"].as_f64().unwrap();
    assert!((a_hat - 1.0).abs() < 0.05, "a_hat = {a_hat}");

    let out = run(&[
        "correct",
        "--residuals",
        residuals.to_str().unwrap(),
        "--k1",
        "1",
        "--k2",
        "3",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let c = parsed["C"].as_f64().unwrap();
    assert!(
        (c - std::f64::consts::LN_2).abs() < 0.02 * std::f64::consts::LN_2,
        "C = {c}"
    );
}

#[test]
fn fit_rejects_out_of_family_residuals_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let residuals = dir.path().join("pm1.csv");
    std::fs::write(&residuals, "residual\n1\n-1\n1\n-1\n").unwrap();
    let out = run(&["fit", "--residuals", residuals.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("out of family"));
}

#[test]
fn verify_passes_on_the_default_grid() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("result: 9/9 checks passed"));
    for name in [
        "duplication-inequality",
        "half-shift-inequality",
        "y1-positivity",
        "incomplete-gamma-lower-bound",
        "upper-tail-decay",
        "series-two-log-two",
        "sign-tables",
        "variance-gap-identity",
        "variance-reduction",
    ] {
        assert!(text.contains(&format!("{name}: PASS")), "missing {name}");
    }
}

#[test]
fn verify_fault_injection_exits_1_naming_the_check() {
    let out = run(&["verify", "--fault", "series-two-log-two"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("series-two-log-two: FAIL"));
}

#[test]
fn verify_rejects_out_of_domain_grid_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.json");
    std::fs::write(
        &grid,
        r#"{"a_values": [60.0], "x_values": [1.0], "ratio_values": []}"#,
    )
    .unwrap();
    let out = run(&["verify", "--grid", grid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("domain"));
}

#[test]
fn simulate_rejects_n_below_two() {
    let out = run(&[
        "simulate", "--a", "1", "--b", "1", "--k1", "1", "--k2", "3", "--n", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_z_scores_within_bounds() {
    let out = run(&[
        "simulate", "--a", "1", "--b", "1", "--k1", "1", "--k2", "3", "--c", "0", "--n",
        "1000000", "--seed", "1", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(parsed["mean_z"].as_f64().unwrap().abs() <= 4.0);
    assert!(parsed["variance_z"].as_f64().unwrap().abs() <= 4.0);
    assert_eq!(parsed["flags"].as_array().unwrap().len(), 0);
}

#[test]
fn curve_emits_the_documented_headers() {
    let out = run(&[
        "curve", "--a", "1", "--b", "1", "--k1", "1", "--k2", "1", "--sweep", "c", "--from",
        "-2", "--to", "2", "--points", "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("c,expected_loss,variance\n"));
    assert_eq!(text.lines().count(), 6);

    let out = run(&[
        "curve", "--a", "1", "--b", "1", "--k1", "50", "--sweep", "k2", "--from", "1", "--to",
        "200", "--points", "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("k2,C,E0,EC,E_diff,V0,VC,V_diff\n"));
}

#[test]
fn curve_writes_to_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = run(&[
        "curve", "--a", "0.5", "--b", "1", "--k1", "50", "--sweep", "k2", "--from", "1",
        "--to", "200", "--points", "200", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 201);
    // V_diff (last column) stays nonnegative across the sweep
    for line in csv.lines().skip(1) {
        let v_diff: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(v_diff >= 0.0, "V_diff negative in: {line}");
    }
}

#[test]
fn curve_rejects_invalid_ranges_with_exit_2() {
    let out = run(&[
        "curve", "--a", "1", "--b", "1", "--k1", "1", "--k2", "1", "--sweep", "c", "--from",
        "2", "--to", "-2", "--points", "5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "curve", "--a", "1", "--b", "1", "--k1", "1", "--k2", "1", "--sweep", "c", "--from",
        "-2", "--to", "2", "--points", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    // clap's standard usage-error code matches the input-error contract
    let out = run(&["correct", "--a", "1", "--b", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}
