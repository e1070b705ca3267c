//! End-to-end CLI behavior: round-trips, output formats, and exit codes.

use std::process::Command;

use tempfile::tempdir;

fn featlab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_featlab"))
}

fn write_thresh4(dir: &std::path::Path) -> std::path::PathBuf {
    let path = dir.join("thresh4.json");
    featlab::document::save_instance(&featlab::generators::thresh4(), &path).unwrap();
    path
}

#[test]
fn analyze_prints_the_cost_table() {
    let dir = tempdir().unwrap();
    let inst = write_thresh4(dir.path());
    let out = featlab().args(["analyze", "--instance"]).arg(&inst).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("(0, inf, 2)"), "{text}");
    assert!(text.contains("(1, 2, inf)"), "{text}");
}

#[test]
fn analyze_machine_rows_are_structured() {
    let dir = tempdir().unwrap();
    let inst = write_thresh4(dir.path());
    let out = featlab()
        .args(["analyze", "--format", "machine", "--learner", "lin", "--instance"])
        .arg(&inst)
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["feature_set"], serde_json::json!([]));
    assert_eq!(rows[0]["invalidation"], serde_json::json!(2));
    assert_eq!(rows[0]["concept_spec"], serde_json::json!("inf"));
    assert_eq!(rows[1]["concept_spec"], serde_json::json!(2));
}

#[test]
fn generated_files_feed_analyze_and_simulate_unchanged() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("gen.json");
    let out = featlab()
        .args(["generate", "--kind", "1nn-explosion", "--k", "3", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("certificate"), "{text}");

    // The written document loads back identically (canonical form).
    let reloaded = featlab::document::load_instance(&path).unwrap();
    assert_eq!(featlab::document::instance_to_json(&reloaded), std::fs::read_to_string(&path).unwrap());

    let out = featlab()
        .args(["simulate", "--learner", "1nn", "--protocol", "edf", "--optimal", "--format", "machine", "--instance"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2]["labels"], serde_json::json!("inf"));
}

#[test]
fn scripted_replay_reports_teaching_cost() {
    let dir = tempdir().unwrap();
    let inst = write_thresh4(dir.path());
    let script = dir.path().join("script.json");
    std::fs::write(
        &script,
        r#"[{"add_feature": "f1"}, {"add_example": "x2"}, {"add_example": "x3"}]"#,
    )
    .unwrap();
    let out = featlab()
        .args(["simulate", "--learner", "lin", "--protocol", "open"])
        .arg("--instance")
        .arg(&inst)
        .arg("--script")
        .arg(&script)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("terminated: true"), "{text}");
    assert!(text.contains("teaching cost: (1, 2)"), "{text}");
}

#[test]
fn validation_failure_exits_2() {
    let dir = tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"objects": [{"id": "x1", "label": 0}],
            "features": [{"id": "f1", "values": {"x1": "1/0"}}],
            "lattice": [[], ["f1"]]}"#,
    )
    .unwrap();
    let out = featlab().args(["analyze", "--instance"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("zero denominator"), "{err}");
}

#[test]
fn illegal_script_exits_5_with_step_index() {
    let dir = tempdir().unwrap();
    let inst = write_thresh4(dir.path());
    let script = dir.path().join("script.json");
    std::fs::write(&script, r#"[{"add_example": "x1"}, {"add_example": "x1"}]"#).unwrap();
    let out = featlab()
        .args(["simulate", "--learner", "lin", "--protocol", "open"])
        .arg("--instance")
        .arg(&inst)
        .arg("--script")
        .arg(&script)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("step 1"), "{err}");
}

#[test]
fn budget_exhaustion_exits_4() {
    let dir = tempdir().unwrap();
    let inst = write_thresh4(dir.path());
    let out = featlab()
        .args(["analyze", "--budget", "2", "--instance"])
        .arg(&inst)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn verify_small_suite_passes_and_is_deterministic() {
    let dir = tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = featlab()
            .args(["verify", "--trials", "8", "--seed", "7", "--format", "machine", "--out"])
            .arg(path)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b);
    let doc: serde_json::Value = serde_json::from_slice(&bytes_a).unwrap();
    assert_eq!(doc["passed"], serde_json::json!(true));
}

#[test]
fn verify_accepts_extra_instances_and_property_selection() {
    let dir = tempdir().unwrap();
    let inst = write_thresh4(dir.path());
    let out = featlab()
        .args(["verify", "--trials", "4", "--props", "P1,P8", "--instance"])
        .arg(&inst)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("P1"), "{text}");
    assert!(text.contains("P8"), "{text}");
    assert!(!text.contains("P7 "), "{text}");
}
