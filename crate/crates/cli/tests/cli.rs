//! End-to-end tests of the `qpr` binary: exit codes, document round trips,
//! and report determinism.

use std::path::Path;
use std::process::{Command, Output};

fn qpr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpr"))
        .args(args)
        .env_remove("QPR_MODE")
        .output()
        .expect("binary runs")
}

fn qpr_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpr"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn write_json(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const STABILIZER_DOC: &str = r#"{"version": 1, "dim": 2, "bases": [
  {"bloch": [1, 0, 0]},
  {"bloch": [0, 1, 0]},
  {"bloch": [0, 0, 1]}
]}"#;

#[test]
fn certify_stabilizer_feasible_exact() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_json(dir.path(), "stab.json", STABILIZER_DOC);
    let out_path = dir.path().join("cert.json");
    let output = qpr(&[
        "certify",
        &input,
        "--mode",
        "exact",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{output:?}");

    let cert: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&out_path).unwrap()).unwrap();
    assert_eq!(cert["verdict"], "feasible");
    assert_eq!(cert["mode"], "exact");
    assert_eq!(cert["witness_verified"], true);
    let q = cert["witness"]["q"].as_object().unwrap();
    assert_eq!(q.len(), 8);
    for v in q.values() {
        assert_eq!(v.as_str().unwrap(), "1/4");
    }
    assert_eq!(cert["input_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn certify_coplanar_infeasible_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let doc = format!(
        r#"{{"version": 1, "dim": 2, "bases": [
            {{"bloch": [1, 0, 0]}},
            {{"bloch": [0, 0, 1]}},
            {{"bloch": [{s}, 0, {s}]}}
        ]}}"#
    );
    let input = write_json(dir.path(), "coplanar.json", &doc);
    let output = qpr(&["certify", &input, "--mode", "float"]);
    assert_eq!(output.status.code(), Some(1), "{output:?}");
    let cert: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(cert["verdict"], "infeasible");
    assert!(cert["witness"]["farkas"].is_array());
}

#[test]
fn certify_vector_basis_input() {
    let dir = tempfile::tempdir().unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // x basis as explicit kets plus the z basis as a Bloch vector.
    let doc = format!(
        r#"{{"version": 1, "dim": 2, "bases": [
            {{"vectors": [
                [{{"re": {s}, "im": 0}}, {{"re": {s}, "im": 0}}],
                [{{"re": {s}, "im": 0}}, {{"re": -{s}, "im": 0}}]
            ]}},
            {{"bloch": [0, 0, 1]}}
        ]}}"#
    );
    let input = write_json(dir.path(), "vectors.json", &doc);
    let output = qpr(&["certify", &input]);
    assert_eq!(output.status.code(), Some(0), "{output:?}");
}

#[test]
fn certify_malformed_input_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_json(dir.path(), "bad.json", "{not json");
    let output = qpr(&["certify", &input]);
    assert_eq!(output.status.code(), Some(2));

    let missing = dir.path().join("missing.json");
    let output = qpr(&["certify", missing.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));

    // Duplicate bases violate the distinctness assumption.
    let dup = write_json(
        dir.path(),
        "dup.json",
        r#"{"version": 1, "dim": 2, "bases": [{"bloch": [0,0,1]}, {"bloch": [0,0,-1]}]}"#,
    );
    let output = qpr(&["certify", &dup]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn qpr_mode_env_sets_the_default() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_json(dir.path(), "stab.json", STABILIZER_DOC);
    let output = qpr_with_env(&["certify", &input], "QPR_MODE", "exact");
    assert_eq!(output.status.code(), Some(0));
    let cert: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(cert["mode"], "exact");

    let output = qpr_with_env(&["certify", &input], "QPR_MODE", "bogus");
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn family_emits_bases_and_frames() {
    // Stabilizer-point d3: bases only.
    let output = qpr(&["family", "d3", "--theta", "0.9553166181245093"]);
    assert_eq!(output.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(doc["bases"].as_array().unwrap().len(), 3);
    assert!(doc.get("frame").is_none());

    // Cube with frame.
    let output = qpr(&[
        "family",
        "cuboid",
        "--theta",
        "0.9553166181245093",
        "--phi",
        "0.7853981633974483",
        "--emit-frame",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(doc["bases"].as_array().unwrap().len(), 4);
    assert_eq!(doc["frame"].as_array().unwrap().len(), 6);

    // Out-of-bound d3 distribution: exit 2 naming the bound.
    let output = qpr(&["family", "d3", "--theta", "1.5708", "--emit-frame"]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("8/9"), "{stderr}");

    // Icosahedron: bases fine, frame impossible.
    let output = qpr(&["family", "icosahedron"]);
    assert_eq!(output.status.code(), Some(0));
    let output = qpr(&["family", "icosahedron", "--emit-frame"]);
    assert_eq!(output.status.code(), Some(2));

    let output = qpr(&["family", "nonsense"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn scan_finds_boundaries_and_reports_no_threshold() {
    let output = qpr(&[
        "scan", "d3", "--param", "theta", "--lo", "0.5", "--hi", "1.5",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("sin^2(theta) = 0.8888"), "{text}");

    let output = qpr(&[
        "scan",
        "c2",
        "--param",
        "phi",
        "--theta",
        "1.0471975511965976",
        "--lo",
        "0.05",
        "--hi",
        "1.5707963267948966",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("cos(phi) = 0.8660"), "{text}");

    let output = qpr(&[
        "scan", "d3", "--param", "theta", "--lo", "0.2", "--hi", "0.3",
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("no threshold"));
}

#[test]
fn simulate_matches_matrix_products() {
    let output = qpr(&[
        "simulate",
        "--family",
        "stabilizer",
        "--initial",
        "z+",
        "--circuit",
        "H",
        "--measure",
        "x",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("agreement: true"), "{text}");
    assert!(
        text.contains("ontic:     [1.000000000000, 0.000000000000]"),
        "{text}"
    );

    let output = qpr(&[
        "simulate",
        "--family",
        "stabilizer",
        "--initial",
        "z+",
        "--circuit",
        "H Q",
        "--measure",
        "z",
    ]);
    assert_eq!(output.status.code(), Some(2));

    let output = qpr(&[
        "simulate",
        "--family",
        "d3",
        "--theta",
        "0.8",
        "--initial",
        "b1+",
        "--circuit",
        "GAMMA",
        "--measure",
        "b2",
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&output.stdout).contains("agreement: true"));
}

#[test]
fn verify_passes_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let run = |path: &Path| {
        let output = qpr(&[
            "verify",
            "--suite",
            "qubit",
            "--trials",
            "25",
            "--seed",
            "11",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(output.status.code(), Some(0), "{output:?}");
    };
    run(&a);
    run(&b);
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b, "same-seed reports must be byte-identical");

    let report: serde_json::Value = serde_json::from_slice(&bytes_a).unwrap();
    assert_eq!(report["all_passed"], true);
    for check in report["checks"].as_array().unwrap() {
        assert!(check["mode"] == "exact" || check["mode"] == "float");
    }

    let output = qpr(&["verify", "--suite", "bogus"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn qudit_suite_passes() {
    let output = qpr(&[
        "verify", "--suite", "qudit", "--trials", "25", "--seed", "3",
    ]);
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["all_passed"], true);
}
