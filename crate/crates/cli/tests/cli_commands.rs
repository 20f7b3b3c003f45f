use nilprox_cli::report::without_timestamp;
use serde_json::Value;
use std::path::Path;
use std::process::Command;

fn nilprox(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nilprox")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn kahan_small_order_passes_and_large_order_flags_anomaly() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("k.json");
    assert_eq!(nilprox(&["kahan", "--n", "16", "--m", "2", "--report", s(&rep)]).0, 0);
    let v = read_json(&rep);
    assert_eq!(v["results"]["checks"], serde_json::json!([true, true, true, true]));
    assert_eq!(v["results"]["density"]["m"], 2);
    for key in ["tool_version", "config", "seed", "tolerances", "claims", "timestamp"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(nilprox(&["kahan", "--n", "64", "--report", s(&rep)]).0, 4);
    assert_eq!(read_json(&rep)["results"]["checks"][1], false);
}

#[test]
fn identity_distance_bracket_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("id2.cmat");
    std::fs::write(&m, "2 2\n1,0 0,0\n0,0 1,0\n").unwrap();
    let rep = dir.path().join("d.json");
    let args = ["distance", "--matrix", s(&m), "--restarts", "2", "--iters", "50", "--report", s(&rep)];
    assert_eq!(nilprox(&args).0, 0);
    let r = &read_json(&rep)["results"];
    assert!((r["trace_lower"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((r["estimate"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!(Path::new(r["witness_path"].as_str().unwrap()).exists());
}

#[test]
fn malformed_input_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("bad.cmat");
    std::fs::write(&m, "2 2\n1,0 0,0\n0,0\n").unwrap();
    let (code, err) = nilprox(&["distance", "--matrix", s(&m)]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
    assert_eq!(nilprox(&["regress", "--suite", ""]).0, 2);
    assert_eq!(nilprox(&["regress", "--suite", "nonexistent"]).0, 2);
    assert_eq!(nilprox(&["tower", "--l1", "12", "--ratios", "1x2"]).0, 2);
    assert_eq!(nilprox(&["obstruct", "sequence", "--levels", "1", "--schedule", "0.1"]).0, 3);
}

#[test]
fn boxes_writes_pair_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(&spec, "[[0, 0, 1], [1, 0, 2], [1, 1, 1]]").unwrap();
    let rep = dir.path().join("b.json");
    assert_eq!(nilprox(&["boxes", "--spectrum", s(&spec), "--eps", "1", "--ell", "16", "--report", s(&rep)]).0, 0);
    let r = &read_json(&rep)["results"];
    assert_eq!(r["boxes"].as_array().unwrap().len(), 3);
    assert_eq!(r["per_block_defect"].as_array().unwrap().len(), 2);
    let n = nilprox_core::linalg::parse_cmat(&std::fs::read_to_string(r["N_path"].as_str().unwrap()).unwrap()).unwrap();
    assert_eq!(n.dim(), r["dim"].as_u64().unwrap() as usize);
}

#[test]
fn tower_and_polar_reports() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("t.json");
    assert_eq!(nilprox(&["tower", "--l1", "12", "--ratios", "2x2", "--grid-step", "0.05", "--report", s(&rep)]).0, 0);
    let levels = read_json(&rep)["results"]["levels"].clone();
    assert_eq!(levels[1]["ell"], 48);
    assert!(levels[0]["nil_estimate"].as_f64().is_some());
    assert!(levels[1]["nil_estimate"].is_null() || levels[1]["ell"].as_u64().unwrap() <= 64);
    let p = dir.path().join("p.json");
    assert_eq!(nilprox(&["polar", "--n", "2", "--m", "2", "--grid-step", "0.05", "--report", s(&p)]).0, 0);
    assert!(read_json(&p)["results"]["disk_density"].as_f64().unwrap() >= 0.2);
}

#[test]
fn obstruct_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("t.cmat");
    std::fs::write(&m, "2 2\n1,0 0,0\n0,0 0,0\n").unwrap();
    let rep = dir.path().join("o.json");
    assert_eq!(nilprox(&["obstruct", "scan", "--matrix", s(&m), "--grid", "-1,0,0,0,5", "--report", s(&rep)]).0, 0);
    let r = read_json(&rep);
    assert_eq!(r["results"]["root"], serde_json::json!([-0.5, 0.0]));
    assert_eq!(r["results"]["min_bound"], 0.0);
    assert_eq!(nilprox(&["obstruct", "dyadic", "--n", "3", "--report", s(&rep)]).0, 0);
    assert_eq!(read_json(&rep)["results"]["trace_lower_exact"], serde_json::json!([9, 16]));
    assert_eq!(nilprox(&["obstruct", "sequence", "--levels", "2", "--schedule", "1,0.5", "--report", s(&rep)]).0, 0);
    assert_eq!(read_json(&rep)["results"]["levels"].as_array().unwrap().len(), 2);
}

#[test]
fn tensor_config_with_nilpotent_tail() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.cmat"), "2 2\n1,0 2,0\n0,0 1,0\n").unwrap();
    let cfg = dir.path().join("fam.json");
    std::fs::write(&cfg, r#"{"stem": ["s.cmat"], "tail": "tail_M", "dims": [3]}"#).unwrap();
    let rep = dir.path().join("x.json");
    assert_eq!(nilprox(&["tensor", "--config", s(&cfg), "--K", "2", "--report", s(&rep)]).0, 0);
    let v = read_json(&rep);
    assert_eq!(v["results"]["truncation_dim"], 6);
    assert!(v["claims"].as_array().unwrap().iter().any(|c| c["name"] == "products_vanish" && c["pass"] == true));
    std::fs::write(&cfg, r#"{"stem": ["s.cmat"], "tail": "tail_A", "dims": [3]}"#).unwrap();
    assert_eq!(nilprox(&["tensor", "--config", s(&cfg), "--K", "2", "--report", s(&rep)]).0, 0);
}

#[test]
fn repeated_runs_match_apart_from_the_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        assert_eq!(
            nilprox(&["--quick", "--seed", "5", "regress", "--suite", "6,9,bottleneck_matcher", "--report", s(p)]).0,
            0
        );
    }
    let (ta, tb) = (std::fs::read_to_string(&a).unwrap(), std::fs::read_to_string(&b).unwrap());
    assert_eq!(without_timestamp(&ta).unwrap(), without_timestamp(&tb).unwrap());
    assert_eq!(read_json(&a)["config"]["suite"].as_array().unwrap().len(), 2);
}

#[test]
fn thread_cap_must_be_a_number() {
    let out = Command::new(env!("CARGO_BIN_EXE_nilprox"))
        .args(["obstruct", "dyadic", "--n", "2"])
        .env("NILPROX_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let ok = Command::new(env!("CARGO_BIN_EXE_nilprox"))
        .args(["obstruct", "dyadic", "--n", "2"])
        .env("NILPROX_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
}
