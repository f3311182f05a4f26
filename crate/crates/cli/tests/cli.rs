//! End-to-end tests of the command-line surface: schemas, determinism, and
//! the documented exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn pentagram(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pentagram"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is valid JSON")
}

#[test]
fn generate_is_deterministic_and_valid() {
    let a = pentagram(&["generate", "--d", "3", "--n", "7", "--seed", "1"]);
    let b = pentagram(&["generate", "--d", "3", "--n", "7", "--seed", "1"]);
    assert_eq!(a.stdout, b.stdout, "same seed gives byte-identical output");
    let doc = stdout_json(&a);
    assert_eq!(doc["d"], 3);
    assert_eq!(doc["n"], 7);
    assert_eq!(doc["coeffs"].as_array().unwrap().len(), 7);
    let c = pentagram(&["generate", "--d", "3", "--n", "7", "--seed", "2"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn generate_corrugated_zeros_middle_column() {
    let out = pentagram(&["generate", "--d", "3", "--n", "7", "--seed", "1", "--corrugated"]);
    let doc = stdout_json(&out);
    for row in doc["coeffs"].as_array().unwrap() {
        assert_eq!(row[1], "0");
    }
}

#[test]
fn generated_polygons_survive_apply() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 1..=20u64 {
        let path = dir.path().join(format!("p{seed}.json"));
        let out = pentagram(&[
            "generate", "--d", "3", "--n", "7", "--seed", &seed.to_string(),
            "--output", path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        let out = pentagram(&[
            "apply", "--input", path.to_str().unwrap(), "--map", r#"{"variant":"dented","m":1}"#,
        ]);
        assert!(
            out.status.success(),
            "seed {seed}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn apply_trace_lists_every_step() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    pentagram(&["generate", "--d", "3", "--n", "7", "--seed", "3", "--output", path.to_str().unwrap()]);
    let out = pentagram(&[
        "apply", "--input", path.to_str().unwrap(), "--map", r#"{"variant":"dented","m":2}"#,
        "--iterations", "3", "--trace",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["trace"].as_array().unwrap().len(), 4, "source plus three steps");
}

#[test]
fn exit_codes_follow_the_table() {
    // 2: bad arguments
    let out = pentagram(&["generate", "--d", "3", "--n", "4", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2), "period too small is an argument error");
    let out = pentagram(&["verify", "nonsense", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // 2: unparsable map spec
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    pentagram(&["generate", "--d", "3", "--n", "7", "--seed", "1", "--output", path.to_str().unwrap()]);
    let out = pentagram(&["apply", "--input", path.to_str().unwrap(), "--map", "{bad"]);
    assert_eq!(out.status.code(), Some(2));
    // 4: degenerate geometry (corrugated map on a non-corrugated polygon)
    let out = pentagram(&[
        "apply", "--input", path.to_str().unwrap(), "--map", r#"{"variant":"corrugated"}"#,
    ]);
    assert_eq!(out.status.code(), Some(4));
    // 5: spectral variant mismatch (corrugated Lax on a generic polygon)
    let out = pentagram(&["spectrum", "--input", path.to_str().unwrap(), "--variant", "corrugated"]);
    assert_eq!(out.status.code(), Some(5));
    // 6: plot chart failure (the canonical window starts at the basis, which
    // lies on every coordinate hyperplane)
    let out = pentagram(&["plot", "--input", path.to_str().unwrap(), "--chart", "3"]);
    assert_eq!(out.status.code(), Some(6));
}

#[test]
fn verify_reports_and_exit_codes() {
    let out = pentagram(&["verify", "duality", "--d", "3", "--I", "1,2", "--J", "1,1", "--n", "7", "--seed", "2"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["checks"][0]["witness"], "shift=5");

    let out = pentagram(&["verify", "scaling", "--d", "3", "--m", "1", "--s", "2", "--n", "7", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0));

    // a degenerate instance is an honest failed check, exit 1
    let out = pentagram(&["verify", "corrugated", "--d", "3", "--n", "7", "--seed", "961"]);
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["pass"], false);

    // unsupported conservation variant is reported, not silently skipped
    let out = pentagram(&[
        "verify", "conservation", "--variant", "generalized", "--I", "2,3", "--J", "1,1",
        "--d", "3", "--n", "7", "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert!(doc["checks"][0]["witness"].as_str().unwrap().contains("no Lax variant registered"));
}

#[test]
fn classical_facts_via_verify() {
    let out = pentagram(&["verify", "closed", "--n", "5", "--seed", "3"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["checks"][0]["witness"], "shift=4");
    let out = pentagram(&["verify", "closed", "--n", "6", "--seed", "3"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["checks"][0]["witness"], "shift=0");
}

#[test]
fn spectrum_report_schema_and_genus() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    pentagram(&["generate", "--d", "3", "--n", "5", "--seed", "1", "--output", path.to_str().unwrap()]);
    let out = pentagram(&[
        "spectrum", "--input", path.to_str().unwrap(), "--variant", "dented", "--m", "1", "--genus",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["genus"], 6);
    assert_eq!(doc["finite_branch_count"], 15);
    assert_eq!(doc["squarefree"], true);
    assert_eq!(doc["d"], 3);
    assert_eq!(doc["n"], 5);
    assert!(doc["R"].as_array().unwrap().iter().any(|t| t["k"] == 4));
    assert!(doc["casimirs"].as_array().unwrap().iter().all(|c| c["matches"] == true));

    // corrugated genus at n=9 (divisible by 3)
    let path9 = dir.path().join("p9.json");
    pentagram(&[
        "generate", "--d", "3", "--n", "9", "--seed", "1", "--corrugated",
        "--output", path9.to_str().unwrap(),
    ]);
    let out = pentagram(&[
        "spectrum", "--input", path9.to_str().unwrap(), "--variant", "corrugated", "--genus",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["genus"], 6);
}

#[test]
fn plot_counts_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hex.json");
    pentagram(&["generate", "--d", "2", "--n", "6", "--seed", "1", "--output", path.to_str().unwrap()]);
    let a = pentagram(&["plot", "--input", path.to_str().unwrap(), "--iterations", "2"]);
    assert!(a.status.success());
    let svg = String::from_utf8(a.stdout).unwrap();
    assert_eq!(svg.matches("<polygon").count(), 2, "one polyline per iteration");
    assert_eq!(svg.matches("<circle").count(), 12, "six vertices per iteration");
    let b = pentagram(&["plot", "--input", path.to_str().unwrap(), "--iterations", "2"]);
    assert_eq!(svg.as_bytes(), b.stdout.as_slice(), "identical bytes");
}
