use std::process::{Command, Output};

use serde_json::Value;

fn zharm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zharm"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn config_error(o: &Output) -> String {
    assert_eq!(o.status.code(), Some(2), "{o:?}");
    let v: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["error"]["kind"], "config");
    v["error"]["message"].as_str().unwrap().to_string()
}

#[test]
fn op_writes_index_value_rows() {
    let o = zharm(&[
        "op", "--kind", "riesz", "--alpha", "0.5", "--x", "delta:0", "--window", "-4..4",
    ]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "index,value");
    assert_eq!(rows.len(), 10);
    assert!(rows.contains(&"4,0.5"));
    assert!(rows.contains(&"0,0"));
}

#[test]
fn op_writes_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.csv");
    let o = zharm(&[
        "op",
        "--kind",
        "centered",
        "--alpha",
        "0.5",
        "--x",
        "seq:-1:1,2",
        "--window",
        "0..1",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&p)
        .unwrap()
        .starts_with("index,value\n0,"));
}

#[test]
fn weight_scan_saturates() {
    let o = zharm(&[
        "weight",
        "--family",
        "power:-0.5",
        "--p",
        "1",
        "--centers",
        "-100..100",
        "--nmax",
        "1000",
    ]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert_eq!(v["schema"], 1);
    assert!(v["value"].as_f64().unwrap().is_finite());
    assert!(v["growth"].as_f64().unwrap() <= 0.01);
    let trend = v["trend"].as_array().unwrap();
    let vals: Vec<f64> = trend.iter().map(|t| t["value"].as_f64().unwrap()).collect();
    assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    assert!(v.get("witness").is_some());
}

#[test]
fn weight_accepts_off_diagonal_and_reverse_holder() {
    for args in [
        vec![
            "weight",
            "--family",
            "constant:2",
            "--p",
            "2",
            "--q",
            "inf",
            "--nmax",
            "16",
        ],
        vec![
            "weight",
            "--family",
            "power:0.3",
            "--r",
            "2",
            "--nmax",
            "16",
        ],
        vec![
            "weight",
            "--family",
            "table:0:1,2,3",
            "--p",
            "1",
            "--q",
            "3",
            "--nmax",
            "16",
        ],
    ] {
        let o = zharm(&args);
        assert!(o.status.success(), "{args:?}");
        assert!(stdout_json(&o)["value"].as_f64().unwrap() >= 1.0 - 1e-12);
    }
}

#[test]
fn cover_reports_selection_and_overlap() {
    let o = zharm(&["cover", "--intervals", "0:1,0:5,2:2,-7:3,9:1"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert!(v["max_overlap"].as_u64().unwrap() <= 2);
    let idx: Vec<u64> = v["selection"]["indices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i.as_u64().unwrap())
        .collect();
    assert!(idx.contains(&1) && !idx.contains(&0));
}

#[test]
fn verify_exit_statuses() {
    let o = zharm(&["verify", "E4_8", "--seed", "7", "--cases", "10000"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["sweep"]["violations"], 0);
    assert_eq!(v["sweep"]["cases"], 10000);
    let o = zharm(&["verify", "l3_6", "--family", "monotone", "--cases", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let o = zharm(&[
        "verify", "T3_2", "--seed", "2024", "--cases", "200", "--family", "delta",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn config_errors_exit_two_with_a_record() {
    config_error(&zharm(&[
        "op", "--kind", "riesz", "--alpha", "1.5", "--x", "delta:0",
    ]));
    config_error(&zharm(&[
        "op", "--kind", "riesz", "--alpha", "0.5", "--x", "nonsense",
    ]));
    config_error(&zharm(&[
        "op", "--kind", "sideways", "--alpha", "0.5", "--x", "delta:0",
    ]));
    config_error(&zharm(&["weight", "--family", "power:-2"]));
    config_error(&zharm(&[
        "weight",
        "--family",
        "constant:1",
        "--p",
        "1",
        "--q",
        "nope",
    ]));
    config_error(&zharm(&["cover", "--intervals", "1:x"]));
    config_error(&zharm(&["verify", "T9_9"]));
    config_error(&zharm(&[
        "verify", "L3_6", "--family", "random", "--cases", "5",
    ]));
    config_error(&zharm(&["suite", "--only", "12"]));
    config_error(&zharm(&["frobnicate"]));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "seed = 1\nunknown_key = 3\n").unwrap();
    let msg = config_error(&zharm(&["suite", "--config", cfg.to_str().unwrap()]));
    assert!(msg.contains("unknown_key"), "{msg}");
    let o = Command::new(env!("CARGO_BIN_EXE_zharm"))
        .args(["verify", "E4_8", "--cases", "5"])
        .env("ZHARM_THREADS", "many")
        .output()
        .unwrap();
    config_error(&o);
}

#[test]
fn suite_subset_writes_reports_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rep");
    let base = dir.path().join("baselines.json");
    let o = zharm(&[
        "suite",
        "--only",
        "1,2,7,8",
        "--out",
        out.to_str().unwrap(),
        "--emit-plot-data",
        "--record-baselines",
        base.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    let lines = String::from_utf8(o.stdout).unwrap();
    assert_eq!(
        lines.lines().filter(|l| l.starts_with("criterion")).count(),
        4
    );
    assert!(lines.lines().all(|l| !l.contains("FAIL")));
    for f in [
        "c01_operators.json",
        "c02_closed_forms.json",
        "c07_covering.json",
        "c08_weak_type.json",
        "criteria.json",
        "weak_lambda.csv",
        "weak_counterexample.csv",
    ] {
        assert!(out.join(f).exists(), "{f}");
    }
    let c1: Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("c01_operators.json")).unwrap())
            .unwrap();
    assert_eq!(c1["schema"], 1);
    assert_eq!(c1["criterion"]["passed"], true);
    let b: Value = serde_json::from_str(&std::fs::read_to_string(&base).unwrap()).unwrap();
    assert_eq!(b["schema"], 1);
    assert_eq!(b["records"].as_array().unwrap().len(), 18);
    let csv = std::fs::read_to_string(out.join("weak_lambda.csv")).unwrap();
    assert!(csv.lines().next().unwrap().contains("lambda"));
}
