use std::path::Path;

use indoor_channel::datasets::{write_path_loss_csv, Environment, PathLossSample, Polarization};
use indoor_channel_cli::{dispatch, CommandResult};
use serde_json::Value;

fn run(args: &[&str]) -> CommandResult {
    dispatch(args.iter().copied())
}

fn json(args: &[&str]) -> Value {
    let r = run(args);
    assert_eq!(r.exit_code, 0, "{args:?}: {}", r.stderr);
    serde_json::from_str(&r.stdout).unwrap()
}

fn sweep() -> Vec<PathLossSample> {
    let mut out = Vec::new();
    for (rx, d, env) in [
        ("RX1", 4.0, Environment::Los),
        ("RX2", 12.0, Environment::Nlos),
        ("RX3", 30.0, Environment::Nlos),
    ] {
        for (k, az) in [0.0, 8.0, 16.0].into_iter().enumerate() {
            let base = 75.4936 + 10.0 * if env == Environment::Los { 2.0 } else { 3.5 } * f64::log10(d);
            out.push(PathLossSample {
                frequency_hz: 142e9,
                tx_id: "TX1".into(),
                rx_id: rx.into(),
                distance_m: d,
                environment: env,
                tx_az_deg: az,
                tx_el_deg: 0.0,
                rx_az_deg: 0.0,
                rx_el_deg: 0.0,
                tx_pol: Polarization::Vertical,
                rx_pol: Polarization::Vertical,
                path_loss_db: base + 3.0 * k as f64,
            });
        }
    }
    out
}

fn write_sweep(dir: &Path) -> String {
    let path = dir.join("sweep.csv");
    write_path_loss_csv(std::fs::File::create(&path).unwrap(), &sweep()).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn fresnel_normal_incidence() {
    let v = json(&["fresnel", "--eps", "6.4", "--angle", "0"]);
    assert!((v["loss_db"].as_f64().unwrap() - 7.25).abs() < 0.05);
    let r = run(&["fresnel", "--eps", "6.4", "--angle", "0"]);
    assert!(r.stdout.contains("\"loss_db\": 7.2622"));
}

#[test]
fn error_exit_codes() {
    let r = run(&["budget", "--refl-db", "0", "--part-db", "3"]);
    assert_eq!(r.exit_code, 2);
    assert!(r.stderr.contains("OverUnityBudget"));
    assert!(r.stdout.is_empty());

    let r = run(&["fit-ci", "--input", "missing.csv", "--freq", "142e9"]);
    assert_eq!(r.exit_code, 2);
    assert!(r.stderr.contains("FileNotFound"));

    let r = run(&["fresnel", "--eps", "0.5", "--angle", "0"]);
    assert_eq!(r.exit_code, 2);
    assert!(r.stderr.contains("InvalidParameter"));

    let r = run(&["fresnel", "--eps", "1", "--angle", "0"]);
    assert_eq!(r.exit_code, 2);
    assert!(r.stderr.contains("PerfectTransmission"));
}

#[test]
fn usage_errors() {
    let r = run(&["teleport"]);
    assert_eq!(r.exit_code, 1);
    assert!(r.stderr.contains("Usage"));
    assert_eq!(run(&[]).exit_code, 1);
    assert_eq!(run(&["fresnel", "--eps", "x", "--angle", "0"]).exit_code, 1);
    assert_eq!(run(&["fresnel", "--eps", "6.4"]).exit_code, 1);
    assert_eq!(
        run(&["fresnel", "--eps", "6.4", "--angle", "0", "--format", "xml"]).exit_code,
        1
    );
    assert_eq!(
        run(&["scatter-pattern", "--angle", "10", "--freq", "60e9"]).exit_code,
        1
    );

    let help = run(&["--help"]);
    assert_eq!(help.exit_code, 0);
    assert!(help.stdout.contains("paper-tables"));
    assert_eq!(run(&["--version"]).exit_code, 0);
}

#[test]
fn paper_tables_match_fixture() {
    let r = run(&["paper-tables"]);
    assert_eq!(r.exit_code, 0);
    assert_eq!(r.stdout, include_str!("fixtures/paper_tables.json"));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = write_sweep(dir.path());
    let commands: Vec<Vec<&str>> = vec![
        vec!["fresnel", "--eps", "5.2", "--angle", "30"],
        vec!["estimate-eps"],
        vec!["fit-linear", "--format", "csv"],
        vec!["scatter-pattern", "--angle", "30"],
        vec!["backscatter", "--angle", "60"],
        vec![
            "partition",
            "--pt-dbm",
            "0",
            "--pr-dbm",
            "-90",
            "--distance",
            "3",
            "--freq",
            "142e9",
        ],
        vec!["xpd", "--pair", "70", "25"],
        vec!["depol-margin"],
        vec!["budget", "--refl-db", "7.25", "--part-db", "8.46"],
        vec!["fspl", "--freq", "28e9", "--distance", "1"],
        vec!["ci-eval", "--freq", "142e9", "--ple", "2", "--distance", "10"],
        vec!["fit-ci", "--input", &sweep],
        vec!["reduce-directional", "--input", &sweep],
        vec!["paper-tables", "--format", "csv"],
        vec!["validate", "--input", &sweep],
    ];
    for args in commands {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.exit_code, 0, "{args:?}: {}", a.stderr);
        assert_eq!(a, b, "{args:?}");
        if !args.contains(&"csv") {
            serde_json::from_str::<Value>(&a.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        }
    }
}

#[test]
fn numbers_use_four_decimals() {
    let r = run(&["fspl", "--freq", "142e9", "--distance", "1"]);
    assert!(r.stdout.contains("\"fspl_db\": 75.4936"), "{}", r.stdout);
    assert!(r.stdout.contains("\"distance_m\": 1.0000"));
}

#[test]
fn reduce_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = write_sweep(dir.path());
    let best = dir.path().join("best.csv");
    let best_str = best.to_str().unwrap();
    let r = run(&[
        "reduce-directional",
        "--input",
        &sweep,
        "--format",
        "csv",
        "--output",
        best_str,
    ]);
    assert_eq!(r.exit_code, 0, "{}", r.stderr);
    assert!(r.stdout.is_empty());

    let best_rows = indoor_channel::datasets::load_path_loss_csv(&best).unwrap();
    assert_eq!(best_rows.len(), 2);
    assert!(best_rows.iter().all(|s| s.tx_az_deg == 0.0));

    let v = json(&["fit-ci", "--input", best_str, "--env", "ALL"]);
    let n = v[0]["ple"].as_f64().unwrap();
    assert!((n - 3.5).abs() < 1e-3, "n = {n}");

    let v = json(&["fit-ci", "--input", &sweep]);
    let envs: Vec<_> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["environment"].as_str().unwrap().to_owned())
        .collect();
    assert_eq!(envs, ["LOS", "NLOS_BEST", "NLOS"]);
    let ple = |i: usize| v[i]["ple"].as_f64().unwrap();
    assert!(ple(0) < ple(1) && ple(1) < ple(2));

    let v = json(&["fit-ci", "--input", &sweep, "--env", "NLOS_BEST"]);
    assert_eq!(v[0]["n_samples"], 2);
    assert_eq!(run(&["fit-ci", "--input", &sweep, "--env", "LOST"]).exit_code, 1);
    let r = run(&["fit-ci", "--input", &sweep, "--freq", "28e9"]);
    assert_eq!(r.exit_code, 2);
    assert!(r.stderr.contains("MixedFrequencies"));
}

#[test]
fn validate_reports_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let mut rows = sweep();
    rows.push(rows[0].clone());
    let path = dir.path().join("dup.csv");
    write_path_loss_csv(std::fs::File::create(&path).unwrap(), &rows).unwrap();
    let v = json(&["validate", "--input", path.to_str().unwrap()]);
    assert_eq!(v["count"], 10);
    assert_eq!(v["per_environment"]["LOS"], 4);
    assert_eq!(v["duplicates"][0]["rows"], serde_json::json!([0, 9]));
}

#[test]
fn reflection_commands_take_csv_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("refl.csv");
    std::fs::write(
        &path,
        "freq_hz,incident_angle_deg,reflection_loss_db\n60e9,10,8.0\n60e9,45,5.5\n60e9,70,2.5\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let v = json(&["estimate-eps", "--input", p]);
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["samples_used"], 3);
    let v = json(&["fit-linear", "--input", p]);
    assert!(v[0]["slope"].as_f64().unwrap() > 0.0);

    let v = json(&["estimate-eps", "--freq", "142e9"]);
    assert!((v[0]["eps_r"].as_f64().unwrap() - 6.4).abs() < 1.0);
    let r = run(&["estimate-eps", "--freq", "60e9"]);
    assert_eq!(r.exit_code, 2);
    assert!(r.stderr.contains("TooFewSamples"));
}

#[test]
fn pattern_csv_feeds_backscatter() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pattern.csv");
    let p = path.to_str().unwrap();
    let r = run(&["scatter-pattern", "--angle", "30", "--format", "csv", "--output", p]);
    assert_eq!(r.exit_code, 0, "{}", r.stderr);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("observation_angle_deg,relative_power_db\n"));
    assert_eq!(text.lines().count(), 18);

    let from_file = json(&["backscatter", "--angle", "30", "--input", p]);
    let from_model = json(&["backscatter", "--angle", "30"]);
    assert_eq!(from_file["smooth"], true);
    let a = from_file["backscatter_margin_db"].as_f64().unwrap();
    let b = from_model["backscatter_margin_db"].as_f64().unwrap();
    assert!((a - b).abs() < 1e-3);

    let r = run(&["backscatter", "--angle", "30", "--obs", "10,30,50"]);
    assert_eq!(r.exit_code, 2);
    assert!(r.stderr.contains("OneSidedPattern"));
    let r = run(&["scatter-pattern", "--angle", "25", "--obs=-20,10,20"]);
    assert_eq!(r.exit_code, 2);
    assert!(r.stderr.contains("MissingSpecularAngle"));
}

#[test]
fn link_commands() {
    let v = json(&[
        "partition",
        "--pt-dbm",
        "0",
        "--pr-dbm",
        "-41.256",
        "--distance",
        "3",
        "--freq",
        "142e9",
        "--gains-dbi",
        "27",
        "27",
    ]);
    assert!((v["loss_db"].as_f64().unwrap() - 10.22).abs() < 1e-3);
    assert_eq!(v["negative"], false);

    let v = json(&["xpd", "--pair", "64.0", "20.0", "--pair", "66.0", "20.0"]);
    assert_eq!(v["distances"], 2);
    assert_eq!(v["consistent"], false);

    let v = json(&["depol-margin", "--freq", "28e9", "--material", "clear_glass"]);
    assert!((v[0]["margin_db"].as_f64().unwrap() - (21.44 - 19.30)).abs() < 1e-9);
    let v = json(&["depol-margin", "--cross-db", "30", "--xpd-db", "20"]);
    assert_eq!(v[0]["margin_db"].as_f64().unwrap(), 10.0);
    assert!(v[0]["material"].is_null());

    let v = json(&["ci-eval", "--freq", "142e9", "--env", "LOS", "--distance", "1"]);
    assert!((v["path_loss_db"].as_f64().unwrap() - 75.4936).abs() < 1e-9);
    assert_eq!(run(&["ci-eval", "--freq", "142e9", "--distance", "1"]).exit_code, 1);
    let r = run(&["ci-eval", "--freq", "142e9", "--ple", "2", "--distance", "0.5"]);
    assert_eq!(r.exit_code, 2);
    assert!(r.stderr.contains("BelowReferenceDistance"));
}

#[test]
fn unwritable_output_is_a_data_error() {
    let r = run(&[
        "fspl",
        "--freq",
        "28e9",
        "--distance",
        "2",
        "--output",
        "/nonexistent/dir/out.json",
    ]);
    assert_eq!(r.exit_code, 2);
    assert!(r.stderr.contains("Io"));
}
