use std::process::{Command, Output};

use serde_json::Value;

fn rbf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbf-lp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn help_lists_every_subcommand() {
    let o = rbf(&["--help"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout);
    for sub in ["kernels", "spectral", "measure", "property2", "rates", "ratio-diag"] {
        assert!(text.contains(sub), "{sub} missing from help");
    }
}

#[test]
fn d3_k1_table_is_one_minus_r_to_the_fourth_times_4r_plus_1() {
    let o = rbf(&["kernels", "table", "--d", "3", "--k", "1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["factored"]["ell"], 4);
    assert_eq!(v["factored"]["q"], serde_json::json!([1, 4]));
    assert_eq!(v["factored"]["scale"], serde_json::json!(["1", "20"]));
    assert_eq!(v["boundary_smooth"], true);
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn measure_check_k1_residual_below_threshold() {
    let o = rbf(&["measure", "check", "--k", "1", "--young-trials", "10"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert!(v["max_residual"].as_f64().unwrap() < 1e-4);
    assert_eq!(v["young"]["violations"], 0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 201);
}

#[test]
fn spectral_check_passes_and_fails_on_tolerance() {
    let ok = rbf(&["spectral", "check", "--d", "1", "--k", "1", "--radii", "8"]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(json(&ok)["max_residual"].as_f64().unwrap() < 1e-6);
    let strict = rbf(&["spectral", "check", "--d", "1", "--k", "1", "--radii", "8", "--tol", "1e-30"]);
    assert_eq!(code(&strict), 1);
}

#[test]
fn configuration_errors_exit_with_two() {
    assert_eq!(code(&rbf(&["kernels", "table", "--k", "1"])), 2);
    assert_eq!(code(&rbf(&["kernels", "table", "--d", "12", "--k", "1"])), 2);
    assert_eq!(code(&rbf(&["spectral", "check", "--d", "2", "--k", "1"])), 2);
    assert_eq!(code(&rbf(&["rates", "--kernel", "wendland", "--k", "1"])), 2);
    assert_eq!(code(&rbf(&["rates", "--kernel", "sobolev", "--d", "1"])), 2);
    assert_eq!(
        code(&rbf(&["rates", "--kernel", "sobolev", "--gamma", "2", "--d", "1", "--p", "0.5"])),
        2
    );
    assert_eq!(
        code(&rbf(&["rates", "--kernel", "wendland", "--k", "1", "--d", "1", "--witness", "qi"])),
        2
    );
}

const QUICK: [&str; 11] = [
    "rates", "--kernel", "wendland", "--k", "1", "--d", "1", "--levels", "4", "--h0", "0.125",
];

#[test]
fn rates_output_is_deterministic() {
    let a = rbf(&QUICK);
    let b = rbf(&QUICK);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let r = &v["reports"][0];
    assert_eq!(r["levels"].as_array().unwrap().len(), 4);
    assert_eq!(r["config_hash"], v["config_hash"]);
    assert!(r["fitted_rate"].as_f64().unwrap() > 1.6);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"kernel": {"family": "wendland", "k": 1}, "d": 1, "seed": 3, "levels": 4, "h0": 0.125, "p": [2, "inf"]}"#,
    )
    .unwrap();
    let out = dir.path().join("run");
    let o = rbf(&[
        "rates",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(out.join("config.json")).unwrap()).unwrap();
    assert_eq!(written["seed"], 5);
    assert_eq!(written["spacings"], serde_json::json!([0.125, 0.0625, 0.03125, 0.015625]));
    for p in ["2", "inf"] {
        let stem = format!("rates_wendland_d1_1_p{p}");
        assert!(out.join(format!("{stem}.json")).exists());
        let csv = std::fs::read_to_string(out.join(format!("{stem}.csv"))).unwrap();
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.starts_with("spacing,h,q,rho,n_points,error,witness,p"));
    }

    std::fs::write(&cfg, r#"{"kernel": {"family": "wendland", "k": 1}, "d": 1, "colour": 3}"#).unwrap();
    assert_eq!(code(&rbf(&["rates", "--config", cfg.to_str().unwrap()])), 2);
}

#[test]
fn property2_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let o = rbf(&[
        "property2",
        "--kernel",
        "wendland",
        "--d",
        "1",
        "--k",
        "1",
        "--h",
        "0.0625",
        "--budget",
        "640",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert!(v["C_emp"].as_f64().unwrap().is_finite());
    assert_eq!(v["kappa"], 2.0);
    assert_eq!(v["l"], 2.0);
    assert_eq!(v["beyond_support_max"], 0.0);
    let rows = std::fs::read_to_string(&csv).unwrap().lines().count() - 1;
    assert_eq!(rows as u64, v["samples"].as_u64().unwrap());
}

#[test]
fn ratio_diag_defaults_gamma() {
    let o = rbf(&["ratio-diag", "--d", "1", "--k", "1", "--points", "10"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["gamma"], 4);
    assert_eq!(v["rows"].as_array().unwrap().len(), 11);
    assert!(v["min"].as_f64().unwrap() > 0.0);
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_rbf-lp"))
            .args(QUICK)
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .expect("binary runs")
    };
    let (one, four) = (run("1"), run("4"));
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn checked_in_configs_resolve() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        // two levels parse and run but are too few for a rate fit, hence exit 1
        let o = rbf(&["rates", "--config", path.to_str().unwrap(), "--levels", "2"]);
        assert_eq!(code(&o), 1, "{}: {}", path.display(), String::from_utf8_lossy(&o.stderr));
        let v = json(&o);
        assert_eq!(v["config"]["spacings"], serde_json::json!([0.125, 0.0625]));
        seen += 1;
    }
    assert!(seen >= 3);
}

#[test]
fn failures_name_the_stage() {
    let o = rbf(&["spectral", "check", "--d", "2", "--k", "1"]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.starts_with("spectral check (d=2, k=1): error:"), "{err}");
}
