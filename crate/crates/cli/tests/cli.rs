//! End-to-end CLI behavior: exit codes, manifests, replay.

use std::process::Command;

fn ftcap() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ftcap"))
}

#[test]
fn capacity_builtin_identity_reports_two_bits() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cap.json");
    let status = ftcap()
        .args(["capacity", "--channel", "identity", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(status.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!((v["value"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    // manifest written alongside
    assert!(dir.path().join("cap.json.manifest.json").exists());
}

#[test]
fn non_cptp_channel_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"dim_in":2,"dim_out":2,"kraus":[[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.5,0.0]]]]}"#,
    )
    .unwrap();
    let out = ftcap()
        .args(["capacity", "--channel"])
        .arg(&bad)
        .args(["--out"])
        .arg(dir.path().join("cap.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_channel_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let out = ftcap()
        .args(["capacity", "--channel"])
        .arg(&bad)
        .args(["--out"])
        .arg(dir.path().join("cap.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_of_domain_p_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = ftcap()
        .args([
            "bounds",
            "--channel",
            "depolarizing(0.1)",
            "--p",
            "0.4",
            "--out",
        ])
        .arg(dir.path().join("bounds.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bounds_at_p_zero_returns_the_capacity() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bounds.json");
    let status = ftcap()
        .args([
            "bounds",
            "--channel",
            "depolarizing(0.1)",
            "--p",
            "0",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(status.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let b = &v["breakdown"];
    let cea = b["cea"].as_f64().unwrap();
    let lb = b["lower_bound"].as_f64().unwrap();
    assert_eq!(cea, lb, "p = 0 must reproduce the capacity exactly");
    assert!((cea - 1.49682).abs() < 1e-3);
}

#[test]
fn bounds_sweep_emits_monotone_nonincreasing_lower_bound_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let status = ftcap()
        .args([
            "bounds",
            "--channel",
            "depolarizing(0.1)",
            "--p",
            "1e-8,1e-7,1e-6,1e-5",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(status.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let lbs: Vec<f64> = rdr
        .records()
        .map(|r| r.unwrap().get(7).unwrap().parse().unwrap())
        .collect();
    assert_eq!(lbs.len(), 4);
    for w in lbs.windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "lower bound must not increase with p");
    }
}

#[test]
fn threshold_command_reports_positive_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("th.json");
    let status = ftcap()
        .args([
            "threshold",
            "--channel",
            "identity",
            "--epsilon",
            "0.1",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(status.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v["result"]["p_th"].as_f64().unwrap() > 0.0);
}

#[test]
fn steane_config_file_drives_the_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"experiment":"ec","p":[0.003],"trials":5000,"seed":3}"#,
    )
    .unwrap();
    let out = dir.path().join("res.csv");
    let status = ftcap()
        .args(["steane", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(status.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("p,rate,stderr,trials,locations"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn steane_domain_violation_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = ftcap()
        .args([
            "steane",
            "--experiment",
            "ec",
            "--p-list",
            "0.5",
            "--trials",
            "1000",
            "--out",
        ])
        .arg(dir.path().join("res.csv"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn replay_detects_tampered_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("res.csv");
    let status = ftcap()
        .args([
            "steane",
            "--experiment",
            "ec",
            "--p-list",
            "3e-3",
            "--trials",
            "5000",
            "--seed",
            "21",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(status.status.success());
    let manifest_path = dir.path().join("res.csv.manifest.json");
    // honest replay passes
    let ok = ftcap().arg("replay").arg(&manifest_path).output().unwrap();
    assert!(ok.status.success());
    // tamper with the recorded digest: replay must fail
    let mut m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest_path).unwrap()).unwrap();
    m["outputs"][0]["sha256"] = serde_json::Value::String("0".repeat(64));
    std::fs::write(&manifest_path, serde_json::to_string(&m).unwrap()).unwrap();
    let bad = ftcap().arg("replay").arg(&manifest_path).output().unwrap();
    assert!(!bad.status.success());
}

#[test]
fn distill_p_and_c_route_through_the_effective_pair_state() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.csv");
    let status = ftcap()
        .args([
            "distill", "--p", "1e-3", "--c", "10", "--k", "1000", "--trials", "100", "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(status.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rec = rdr.records().next().unwrap().unwrap();
    let q: f64 = rec.get(0).unwrap().parse().unwrap();
    assert!((q - 0.04).abs() < 1e-15, "q = 4cp");
}
