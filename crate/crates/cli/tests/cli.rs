use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn symtomo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symtomo")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_fock1(dir: &Path) -> String {
    let path = dir.join("fock1.json");
    std::fs::write(&path, r#"{"dim": 2, "rho_re": [[0, 0], [0, 1]], "rho_im": [[0, 0], [0, 0]]}"#).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn vacuum_tomogram_column() {
    let out = symtomo(&["tomogram", "--source", "builtin:vacuum", "--rays", "1,0", "--xmin", "-6", "--xmax", "6", "--nx", "241"]);
    assert_eq!(code(&out), 0);
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("X,mu,nu,W"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|f| f.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 241);
    for r in &rows {
        let expect = (-r[0] * r[0]).exp() / std::f64::consts::PI.sqrt();
        assert!((r[3] - expect).abs() < 1e-14);
    }
    let summary: Value = serde_json::from_slice(&out.stderr).unwrap();
    let norm = summary["summary"][0]["normalization"].as_f64().unwrap();
    assert!((norm - 1.0).abs() < 1e-6);
    assert_eq!(summary["violation"], false);
}

#[test]
fn counterexample_tomogram_is_flagged() {
    let out = symtomo(&["tomogram", "--source", "builtin:counterexample", "--rays", "1,0;0,2", "--format", "json"]);
    assert_eq!(code(&out), 1);
    let doc = json(&out);
    assert_eq!(doc["summary"][0]["negative"], true);
    assert!(doc["rays"][1]["w"].as_array().unwrap().iter().any(|w| w.as_f64().unwrap() < 0.0));
}

#[test]
fn state_file_tomogram() {
    let dir = tempfile::tempdir().unwrap();
    let fock1 = write_fock1(dir.path());
    let out = symtomo(&["tomogram", "--state", &fock1, "--rays", "0,1", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let norm = json(&out)["summary"][0]["normalization"].as_f64().unwrap();
    assert!((norm - 1.0).abs() < 1e-6, "{norm}");
}

#[test]
fn bad_inputs_exit_two() {
    let out = symtomo(&["tomogram", "--source", "builtin:vacuum", "--rays", "0,0"]);
    assert_eq!(code(&out), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"dim\": 2").unwrap();
    assert_eq!(code(&symtomo(&["certify", "--source", bad.to_str().unwrap()])), 2);
    let not_psd = dir.path().join("neg.json");
    std::fs::write(&not_psd, r#"{"dim": 2, "rho_re": [[1.5, 0], [0, -0.5]], "rho_im": [[0, 0], [0, 0]]}"#).unwrap();
    assert_eq!(code(&symtomo(&["certify", "--source", not_psd.to_str().unwrap()])), 2);
    assert_eq!(code(&symtomo(&["certify", "--source", "builtin:nothing"])), 2);
    assert_eq!(code(&symtomo(&["certify", "--source", "builtin:vacuum", "--format", "csv"])), 2);
}

#[test]
fn certify_exit_codes_and_reproducibility() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let mut texts = Vec::new();
    for _ in 0..2 {
        let out = symtomo(&["certify", "--source", "builtin:vacuum", "--seed", "42", "--out", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
        texts.push(std::fs::read_to_string(&path).unwrap());
    }
    assert!(texts[0] == texts[1], "reports differ");
    let ta = &texts[0];
    let report: Value = serde_json::from_str(ta).unwrap();
    assert_eq!(report["verdict"], "pass");
    assert_eq!(report["config"]["certification"]["seed"], 42);
    assert!(report["version"].is_string());

    let out = symtomo(&["certify", "--source", "builtin:counterexample"]);
    assert_eq!(code(&out), 1);
    let report = json(&out);
    assert_eq!(report["verdict"], "fail");
    assert_eq!(report["witness"].as_array().unwrap().len(), 16);
    assert!(report["min_eigenvalue_overall"].as_f64().unwrap() < -1.6e-5);
}

#[test]
fn reconstruct_roundtrips() {
    let dir = tempfile::tempdir().unwrap();
    let state_out = dir.path().join("state.json");
    let out = symtomo(&["reconstruct", "--source", "builtin:vacuum", "--state-out", state_out.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert!(report["fidelity"].as_f64().unwrap() >= 0.999);
    assert_eq!(report["raw"]["metadata"]["nodes"], 128);
    // The written state is itself a valid source.
    assert_eq!(code(&symtomo(&["tomogram", "--source", state_out.to_str().unwrap()])), 0);

    let out = symtomo(&["reconstruct", "--source", "builtin:thermal:1", "--dim", "16", "--reference", "builtin:thermal:1"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["fidelity"].as_f64().unwrap() >= 0.999);

    let out = symtomo(&["reconstruct", "--source", "builtin:counterexample", "--dim", "16"]);
    assert_eq!(code(&out), 1);
    let report = json(&out);
    assert_eq!(report["accepted"], false);
    assert!(report["diagnostics"]["min_eigenvalue"].as_f64().unwrap() < -1e-3);
}

#[test]
fn purity_reports() {
    for (source, expect) in [("builtin:vacuum", 1.0), ("builtin:fock:1", 1.0), ("builtin:thermal:1", 1.0 / 3.0)] {
        let out = symtomo(&["purity", "--source", source]);
        assert_eq!(code(&out), 0, "{source}");
        let report = json(&out);
        for key in ["purity_characteristic", "purity_direct"] {
            let p = report[key].as_f64().unwrap();
            assert!((p - expect).abs() < 1e-3, "{source} {key} {p}");
        }
        let truth = report["ground_truth"].as_f64().unwrap();
        assert!((truth - expect).abs() < 1e-3);
    }
}

#[test]
fn demos() {
    let out = symtomo(&["demo", "counterexample"]);
    assert_eq!(code(&out), 1);
    let report = json(&out);
    assert_eq!(report["failed_criteria"], true);
    assert!(report["moments"]["p2"].as_f64().unwrap() > 0.0);

    let verdicts = |seed: &str| {
        let out = symtomo(&["demo", "vacuum", "--seed", seed]);
        assert_eq!(code(&out), 0);
        let report = json(&out);
        let kinds: Vec<Value> = report["positivity"].as_array().unwrap().iter().map(|k| k["pass"].clone()).collect();
        (kinds, report["certification"]["verdict"].clone())
    };
    assert_eq!(verdicts("7"), verdicts("42"));
}
