//! End-to-end runs of the `qflow` binary: exit codes, error envelopes,
//! artifact round-trips, and byte-level output determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qflow(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qflow"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const WORKED_PAIR: &str = r#"{
    "d": 2,
    "A": [[1, 0, 0], [0, 1, 0], [0, 0, -1]],
    "xi": ["0", "0", "sqrt(2)"],
    "L": ["1", "1", "sqrt(2)"]
}"#;

const RATIONAL_PAIR: &str = r#"{
    "d": 1,
    "A": [[1, 0, 0], [0, 1, 0], [0, 0, -1]],
    "xi": [0, 0, 0],
    "L": [1, 0, 1]
}"#;

#[test]
fn verify_lemmas_passes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let res = qflow(
        &["verify-lemmas", "--output", out.to_str().unwrap()],
        dir.path(),
    );
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let items = report.as_array().unwrap();
    assert!(items.len() >= 10);
    assert!(items.iter().all(|c| c["pass"] == true));
}

#[test]
fn normalize_emits_a_valid_round_tripping_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "pair.json", WORKED_PAIR);
    let out = dir.path().join("cert.json");
    let res = qflow(
        &[
            "normalize",
            "--input",
            input.to_str().unwrap(),
            "--output",
            out.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["residuals_zero"], true);

    // The emitted scalars re-parse to identical values.
    let cert: qflow_cli::formats::CertificateDoc = serde_json::from_str(&text).unwrap();
    let cert = cert.to_certificate().unwrap();
    let spec: qflow_cli::formats::PairSpec = serde_json::from_str(WORKED_PAIR).unwrap();
    let (q, xi, l) = spec.to_parts().unwrap();
    assert!(qflow_core::normalize::certificate_is_valid(
        &q,
        &xi,
        l.as_ref().unwrap(),
        &cert
    ));
}

#[test]
fn check_hypotheses_reports_pass_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", WORKED_PAIR);
    let res = qflow(&["check-hypotheses", "--input", good.to_str().unwrap()], dir.path());
    assert!(res.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(doc["all_pass"], true);
    assert!(doc.get("witnesses").is_none());

    let bad = write(dir.path(), "bad.json", RATIONAL_PAIR);
    let res = qflow(&["check-hypotheses", "--input", bad.to_str().unwrap()], dir.path());
    assert!(res.status.success(), "a failing report is still a successful check");
    let doc: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(doc["all_pass"], false);
    assert!(doc["witnesses"].is_array());
}

#[test]
fn stabilizer_emits_flow_elements() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "pair.json", WORKED_PAIR);
    let res = qflow(
        &[
            "stabilizer",
            "--input",
            input.to_str().unwrap(),
            "--t-grid",
            "-1:1:1/2",
        ],
        dir.path(),
    );
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(doc["flows"].as_array().unwrap().len(), 5);
    assert_eq!(doc["certificate"]["residuals_zero"], true);
    // t = 0 is the identity flow element.
    let id = &doc["flows"][2];
    assert_eq!(id["t"], "0");
    assert_eq!(id["g"][0][0], "1");
    assert_eq!(id["g"][0][1], "0");
    assert_eq!(id["v"][0], "0");
}

#[test]
fn explore_is_byte_deterministic_and_honors_integrality() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "rational.json", RATIONAL_PAIR);
    let run = |name: &str| {
        let out = dir.path().join(name);
        let res = qflow(
            &[
                "explore",
                "--input",
                input.to_str().unwrap(),
                "--output",
                out.to_str().unwrap(),
                "--grid",
                "1/2:1/2:1,0:0:1",
                "--radius",
                "5,10",
                "--epsilon",
                "0.4",
            ],
            dir.path(),
        );
        assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
        std::fs::read(&out).unwrap()
    };
    let first = run("a.csv");
    let second = run("b.csv");
    assert_eq!(first, second, "identical runs must be byte-identical");

    let text = String::from_utf8(first).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "target_a,target_b,R,x1,x2,x3,err_q,err_l,visited,mode"
    );
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[0], "0.5");
        let err_q: f64 = cols[6].parse().unwrap();
        assert!(err_q >= 0.5, "integer values cannot approach 1/2: {line}");
        assert_eq!(cols[9], "slab_scan");
    }
}

#[test]
fn explore_json_output_mirrors_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "pair.json", WORKED_PAIR);
    let out = dir.path().join("table.json");
    let res = qflow(
        &[
            "explore",
            "--input",
            input.to_str().unwrap(),
            "--output",
            out.to_str().unwrap(),
            "--grid",
            "0:0:1,0:0:1",
            "--radius",
            "10",
            "--seed",
            "1,-1,0",
        ],
        dir.path(),
    );
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let rows = doc.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["mode"], "slab_scan");
    assert_eq!(rows[1]["mode"], "orbit_round");
    assert_eq!(rows[0]["err_q"], "0");
    assert_eq!(rows[0]["err_l"], "0");
    for key in ["target_a", "target_b", "R", "x1", "x2", "x3", "err_q", "err_l", "visited"] {
        assert!(rows[0].get(key).is_some(), "missing column {key}");
    }
}

#[test]
fn reduce_emits_a_three_dimensional_form() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "four.json",
        r#"{
            "d": 2,
            "A": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,-1]],
            "xi": [0, 0, 0, "sqrt(2)"]
        }"#,
    );
    let res = qflow(&["reduce", "--input", input.to_str().unwrap()], dir.path());
    assert!(res.status.success(), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(doc["form"]["A"].as_array().unwrap().len(), 3);
    assert_eq!(doc["steps"].as_array().unwrap().len(), 1);
    // The reduced form re-parses as an input document.
    let spec: qflow_cli::formats::PairSpec =
        serde_json::from_value(doc["form"].clone()).unwrap();
    let (q, xi, _) = spec.to_parts().unwrap();
    let f = qflow_core::forms::InhomogeneousForm::from_form(&q, xi);
    assert!(f.is_indefinite());
    assert!(qflow_core::rationality::is_irrational_inhom(&f));
}

#[test]
fn domain_errors_exit_one_with_an_envelope() {
    let dir = tempfile::tempdir().unwrap();
    // L = x₁ is not tangent to x₁² + x₂² − x₃².
    let input = write(
        dir.path(),
        "pair.json",
        r#"{"d":2,"A":[[1,0,0],[0,1,0],[0,0,-1]],"xi":[0,0,"sqrt(2)"],"L":[1,0,0]}"#,
    );
    let res = qflow(&["normalize", "--input", input.to_str().unwrap()], dir.path());
    assert_eq!(res.status.code(), Some(1));
    let envelope: serde_json::Value = serde_json::from_slice(&res.stderr).unwrap();
    assert_eq!(envelope["error"]["code"], "not_tangent");
}

#[test]
fn io_and_schema_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();

    let res = qflow(&["normalize", "--input", "missing.json"], dir.path());
    assert_eq!(res.status.code(), Some(2));
    let envelope: serde_json::Value = serde_json::from_slice(&res.stderr).unwrap();
    assert_eq!(envelope["error"]["code"], "io");

    let garbage = write(dir.path(), "garbage.json", "{ not json");
    let res = qflow(&["normalize", "--input", garbage.to_str().unwrap()], dir.path());
    assert_eq!(res.status.code(), Some(2));
    let envelope: serde_json::Value = serde_json::from_slice(&res.stderr).unwrap();
    assert_eq!(envelope["error"]["code"], "schema");

    let missing_l = write(
        dir.path(),
        "noell.json",
        r#"{"d":2,"A":[[1,0,0],[0,1,0],[0,0,-1]],"xi":[0,0,"sqrt(2)"]}"#,
    );
    let res = qflow(&["normalize", "--input", missing_l.to_str().unwrap()], dir.path());
    assert_eq!(res.status.code(), Some(2));

    let res = qflow(&["normalize"], dir.path());
    assert_eq!(res.status.code(), Some(2));

    // Unknown flags are usage errors (clap exits 2).
    let res = qflow(&["explore", "--bogus"], dir.path());
    assert_eq!(res.status.code(), Some(2));
}
