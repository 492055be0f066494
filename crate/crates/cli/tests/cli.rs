use std::process::{Command, Output};

fn qring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qring"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

const HEADER: &str =
    "delta_alpha,idx,lambda_numeric,n_label,lambda_continuum,lambda_discrete,aliased,residual";

#[test]
fn figure_b1_defaults() {
    let out = qring(&["figure-b1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(HEADER));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 220);

    // sorted by (delta_alpha, lambda_numeric), 20 rows per twist
    let parsed: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[2].parse().unwrap()))
        .collect();
    assert!(parsed
        .windows(2)
        .all(|w| w[0].0 < w[1].0 || (w[0].0 == w[1].0 && w[0].1 <= w[1].1)));
    let twists: std::collections::BTreeSet<String> =
        rows.iter().map(|r| r[0].to_string()).collect();
    assert_eq!(twists.len(), 11);

    for r in &rows {
        assert!(r[6] == "true" || r[6] == "false");
        let numeric: f64 = r[2].parse().unwrap();
        let discrete: f64 = r[5].parse().unwrap();
        assert!((numeric - discrete).abs() < 1e-9);
    }
}

#[test]
fn figure_b1_endpoints_only() {
    let out = qring(&["figure-b1", "--steps", "2"]);
    assert!(out.status.success());
    let twists: std::collections::BTreeSet<String> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().to_string())
        .collect();
    assert_eq!(
        twists.into_iter().collect::<Vec<_>>(),
        vec!["0", "3.14159265359"]
    );
}

#[test]
fn invalid_inputs_fail() {
    let out = qring(&["figure-b1", "--r", "2"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("invalid grid"));
    assert!(!qring(&["figure-b1", "--steps", "1"]).status.success());
    assert!(!qring(&["superpose", "--coeffs", "1:x"]).status.success());
    assert!(!qring(&["spectrum", "--gauge", "cubic:2"]).status.success());
    assert!(!qring(&["flux", "--radius", "0"]).status.success());
}

#[test]
fn output_is_deterministic() {
    let a = qring(&["figure-b1", "--r", "31", "--steps", "7"]);
    let b = qring(&["figure-b1", "--r", "31", "--steps", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let a = qring(&[
        "spectrum",
        "--delta-alpha",
        "1.3",
        "--gauge",
        "sin:0.4:2",
        "--format",
        "json",
    ]);
    let b = qring(&[
        "spectrum",
        "--delta-alpha",
        "1.3",
        "--gauge",
        "sin:0.4:2",
        "--format",
        "json",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn spectrum_linear_matches_oracle() {
    let out = qring(&["spectrum", "--delta-alpha", "0", "--gauge", "zero"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        format!("{HEADER},gauge_invariance")
    );
    let mut numeric: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    let dx = std::f64::consts::PI / 10.0;
    let mut oracle: Vec<f64> = (-9..=10).map(|n| (n as f64 * dx).sin() / dx).collect();
    numeric.sort_by(f64::total_cmp);
    oracle.sort_by(f64::total_cmp);
    for (a, b) in numeric.iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn spectrum_gauge_column() {
    let out = qring(&[
        "spectrum",
        "--delta-alpha",
        "3.141592653589793",
        "--gauge",
        "sin:0.7:2",
    ]);
    assert!(out.status.success());
    for line in stdout(&out).lines().skip(1) {
        let gap: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(gap <= 1e-9);
    }
}

#[test]
fn spectrum_json_document() {
    let out = qring(&["spectrum", "--delta-alpha", "1", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["config", "eigenvalues", "labels", "diagnostics"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert_eq!(doc["eigenvalues"].as_array().unwrap().len(), 20);
    assert!(doc["diagnostics"]["gauge_invariance"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn literal_sign_sweep_classifies() {
    let out = qring(&["figure-b1", "--sign", "paperliteral", "--steps", "3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    for line in stdout(&out).lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let da: f64 = f[0].parse().unwrap();
        let n: f64 = f[3].parse().unwrap();
        let cont: f64 = f[4].parse().unwrap();
        assert!((cont - (n - da / (2.0 * std::f64::consts::PI))).abs() < 1e-9);
    }
}

#[test]
fn gauge_check_reports_pass() {
    let out = qring(&[
        "gauge-check",
        "--gauge",
        "linear:0.25",
        "--delta-alpha",
        "1.1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row.last(), Some(&"true"));
}

#[test]
fn superpose_admissible_pair() {
    let out = qring(&["superpose", "--coeffs", "0.3,1.3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[2], "true");
    assert!(row[3].parse::<f64>().unwrap() <= 1e-9);

    let out = qring(&["superpose", "--coeffs", "0:1:0,0.3:1:0"]);
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[2], "false");
    assert!((row[3].parse::<f64>().unwrap() - 0.485410).abs() < 1e-6);
}

#[test]
fn bands_half_offset() {
    let out = qring(&["bands", "--q", "0.5", "--n-range", "-1..0"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("degenerate pair (0, -1), momentum transfer 1"));
    assert_eq!(
        stdout(&out),
        "n,momentum,energy\n-1,-0.5,0.25\n0,0.5,0.25\n"
    );

    let out = qring(&["bands", "--q", "0.5", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["degenerate_transition"]["momentum_transfer"], 1.0);
}

#[test]
fn flux_neutral_particle() {
    let out = qring(&[
        "flux",
        "--charge",
        "0",
        "--flux",
        "2.5",
        "--n-range",
        "-2..2",
    ]);
    assert!(out.status.success());
    for line in stdout(&out).lines().skip(1) {
        let (n, lambda) = line.split_once(',').unwrap();
        assert_eq!(n.parse::<f64>().unwrap(), lambda.parse::<f64>().unwrap());
    }
    let out = qring(&["flux", "--flux", "3.141592653589793", "--n-range", "1..1"]);
    assert_eq!(stdout(&out), "n,lambda\n1,1.5\n");
}

#[test]
fn writes_to_out_path() {
    let dir = std::env::temp_dir().join(format!("qring-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fig.csv");
    let out = qring(&["figure-b1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written.lines().count(), 221);
    std::fs::remove_dir_all(&dir).unwrap();
}
