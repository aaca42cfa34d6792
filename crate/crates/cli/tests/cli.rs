//! End-to-end checks of the binary: output values, CSV determinism, exit
//! codes, and the region JSON loader.

use std::process::{Command, Output};

fn caploss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_caploss"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn loss_square_prints_paper_values() {
    let out = caploss(&["loss", "--region", "square:1", "--power", "uniform"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("loss_nats: 0.352970416621345"), "{text}");
    assert!(text.contains("loss_db: 1.53293"), "{text}");
}

#[test]
fn loss_disk_json_fields() {
    let out = caploss(&["loss", "--region", "disk:1", "--power", "0.5", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["lambda"].as_f64().unwrap(), 0.0);
    assert!((v["loss_nats"].as_f64().unwrap() - (1.0 - std::f64::consts::LN_2)).abs() < 1e-12);
    assert!((v["loss_db"].as_f64().unwrap() - 1.3326).abs() < 1e-3);
}

#[test]
fn lambda_reports_residual() {
    let out = caploss(&["lambda", "--region", "disk:1", "--power", "0.25", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let lambda = v["lambda"].as_f64().unwrap();
    assert!(lambda > 0.0);
    assert!(v["residual"].as_f64().unwrap() <= 1e-10 * 0.25);
    // tilted power reproduced the budget
    assert!((v["tilted_power"].as_f64().unwrap() - 0.25).abs() < 1e-10);
}

#[test]
fn figure1_deterministic_and_labeled() {
    let args = [
        "figure1",
        "--snr-min-db",
        "20",
        "--snr-max-db",
        "40",
        "--snr-step-db",
        "10",
        "--qam-orders",
        "4",
    ];
    let a = caploss(&args);
    assert!(a.status.success());
    let mut with_jobs = args.to_vec();
    with_jobs.extend_from_slice(&["--jobs", "4"]);
    let b = caploss(&with_jobs);
    assert!(b.status.success());
    assert_eq!(a.stdout, b.stdout, "CSV must not depend on the schedule");

    let text = stdout(&a);
    let header = text
        .lines()
        .find(|l| !l.starts_with('#'))
        .expect("data header");
    assert_eq!(
        header,
        "inv_sigma2_db,loss_lower_bound_nats,asymptotic_L_nats,qam_loss_m4_nats"
    );
    for column in header.split(',').skip(1) {
        assert!(
            column.ends_with("_nats") || column.ends_with("_db"),
            "column {column} lacks a unit suffix"
        );
    }
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 4); // header + 3 rows
    // metadata records the quadrature order and search settings
    assert!(text.contains("# gh_nodes: 20"));
    assert!(text.contains("# eps_search:"));
}

#[test]
fn figure1_rejects_non_square_region() {
    let out = caploss(&["figure1", "--region", "disk:1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn figure1_heavy_gate() {
    let out = caploss(&[
        "figure1",
        "--qam-orders",
        "22",
        "--snr-max-db",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("--heavy"), "{err}");
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(
        caploss(&["loss", "--region", "square:0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        caploss(&["loss", "--region", "disk:1", "--power", "-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        caploss(&["loss", "--region", "/nonexistent.json"])
            .status
            .code(),
        Some(2)
    );
    // clap usage errors share the config exit code
    assert_eq!(caploss(&["loss"]).status.code(), Some(2));
}

#[test]
fn solver_errors_exit_three() {
    let out = caploss(&["lambda", "--region", "disk:1", "--power", "1e-300"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("lambda solve"), "stage missing: {err}");
}

#[test]
fn region_json_file_round_trip() {
    let dir = std::env::temp_dir().join("caploss-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("poly.json");
    std::fs::write(
        &path,
        r#"{"shape":"polygon","vertices":[[1,-1],[1,1],[-1,1],[-1,-1]]}"#,
    )
    .unwrap();
    let out = caploss(&["loss", "--region", path.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // the polygon is the square of half-side 1
    assert!(
        (v["loss_nats"].as_f64().unwrap() - (std::f64::consts::PI * std::f64::consts::E / 6.0).ln())
            .abs()
            < 1e-9
    );
}

#[test]
fn discretize_row_count() {
    let out = caploss(&["discretize", "--region", "square:1", "--n", "32"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows = text
        .lines()
        .filter(|l| !l.starts_with('#') && *l != "re,im,prob" && !l.is_empty())
        .count();
    assert_eq!(rows, 1024);
}

#[test]
fn qam_mi_grid_validation() {
    let out = caploss(&["qam-mi", "--m", "2", "--snr-db", "20,10"]);
    assert_eq!(out.status.code(), Some(2));
    let out = caploss(&["qam-mi", "--m", "3", "--snr-db", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn qam_mi_matches_monte_carlo() {
    let out = caploss(&[
        "qam-mi",
        "--m",
        "2",
        "--snr-db",
        "20",
        "--mc-samples",
        "100000",
        "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let row = &v[0];
    let gh = row["rate_nats"].as_f64().unwrap();
    let mc = row["mc_rate_nats"].as_f64().unwrap();
    let se = row["mc_std_err_nats"].as_f64().unwrap();
    assert!((gh - mc).abs() <= 3.0 * se + 1e-9);
}
