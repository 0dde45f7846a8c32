//! End-to-end tests of the binary: spec'd exit codes, report formats, and
//! byte stability of written artifacts.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_framebound"))
}

fn run(args: &[&str]) -> Output {
    bin()
        .args(args)
        .env_remove("FRAME_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf8 stderr")
}

fn write_file(dir: &Path, name: &str, contents: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).expect("write fixture");
    path
}

#[test]
fn comb_verification_is_an_equality_with_exit_zero() {
    let output = run(&["verify", "--demo", "dft-pair", "--n", "16", "--p", "1", "--comb"]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let report: Value = serde_json::from_str(&stdout(&output)).expect("json report");
    assert_eq!(report["summary"]["violations"], 0);
    assert_eq!(report["summary"]["equalities"], 3);
    assert_eq!(report["exit"], 0);
    let first = &report["vectors"][0]["reports"][0];
    assert_eq!(first["id"], "product_1");
    assert_eq!(first["lhs"], 16.0);
    assert_eq!(first["holds"], true);
    assert_eq!(first["equality"], true);
}

#[test]
fn random_sweep_on_the_identity_pair_holds() {
    let output = run(&[
        "verify", "--demo", "identity", "--n", "3", "--p", "1", "--random", "100", "--seed", "7",
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let report: Value = serde_json::from_str(&stdout(&output)).expect("json report");
    assert_eq!(report["summary"]["checked"], 300);
    assert_eq!(report["summary"]["violations"], 0);
}

#[test]
fn one_sided_violation_reports_exit_one() {
    // the identity/DFT pair is not an isometric pair at p = 1, and a basis
    // vector breaks the one-sided bound: support 1 against 1/coherence = 2
    let dir = tempfile::tempdir().expect("tempdir");
    let e0 = write_file(dir.path(), "e0.json", r#"{"dim":4,"entries":[[0,1]]}"#);
    let output = run(&[
        "verify", "--demo", "dft-pair", "--n", "4", "--p", "1", "--vectors",
        e0.to_str().expect("utf8 path"),
    ]);
    assert_eq!(output.status.code(), Some(1));
    let report: Value = serde_json::from_str(&stdout(&output)).expect("json report");
    assert!(report["summary"]["violations"].as_u64().expect("count") > 0);
}

#[test]
fn malformed_system_json_is_an_input_error() {
    let dir = tempfile::tempdir().expect("tempdir");
    let bad = write_file(dir.path(), "bad.json", "not json at all");
    let path = bad.to_str().expect("utf8 path");
    let output = run(&["verify", "--system", path, "--cosystem", path, "--p", "1", "--comb"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("invalid JSON"));
}

#[test]
fn non_reconstructing_system_is_refused_with_a_deviation_message() {
    // identity analysis with doubled synthesis fails the round trip
    let dir = tempfile::tempdir().expect("tempdir");
    let system = r#"{
        "p": "1",
        "field": "real",
        "measure": {"kind": "finite", "n": 2},
        "repr": {
            "kind": "dense",
            "analysis": [[1, 0], [0, 1]],
            "synthesis": [[2, 0], [0, 2]]
        }
    }"#;
    let path = write_file(dir.path(), "broken.json", system);
    let p = path.to_str().expect("utf8 path");
    let output = run(&["verify", "--system", p, "--cosystem", p, "--p", "1", "--comb"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(
        stderr(&output).contains("is not reconstructing (deviation="),
        "{}",
        stderr(&output)
    );
}

#[test]
fn zero_vector_input_is_rejected() {
    let dir = tempfile::tempdir().expect("tempdir");
    let zero = write_file(dir.path(), "zero.json", r#"{"dim":4,"entries":[]}"#);
    let output = run(&[
        "verify", "--demo", "dft-pair", "--n", "4", "--p", "1", "--vectors",
        zero.to_str().expect("utf8 path"),
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("zero"));
}

#[test]
fn coherence_of_the_dft_pair_prints_half_in_both_directions() {
    let output = run(&["coherence", "--demo", "dft-pair", "--n", "4"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert_eq!(
        text,
        "coherence f(omega): 5.0000000000000000e-1\ncoherence g(tau): 5.0000000000000000e-1\n"
    );
}

#[test]
fn coherence_gram_csv_has_one_row_per_functional() {
    let dir = tempfile::tempdir().expect("tempdir");
    let gram = dir.path().join("gram.csv");
    let output = run(&[
        "coherence", "--demo", "dft-pair", "--n", "4", "--gram",
        gram.to_str().expect("utf8 path"),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = std::fs::read_to_string(&gram).expect("gram written");
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 4);
        for cell in cells {
            assert_eq!(cell, "5.0000000000000000e-1");
        }
    }
}

#[test]
fn extremal_on_the_dft_pair_is_tight_at_four() {
    let output = run(&["extremal", "--demo", "dft-pair", "--n", "4"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("minimum: 4.0000000000000000e0"), "{text}");
    assert!(text.contains("bound: 4.0000000000000000e0"), "{text}");
    assert!(text.contains("ratio: 1.0000000000000000e0"), "{text}");
}

#[test]
fn extremal_certificate_lists_the_comb_pattern() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cert_path = dir.path().join("cert.json");
    let output = run(&[
        "extremal", "--demo", "dft-pair", "--n", "4", "--out",
        cert_path.to_str().expect("utf8 path"),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let cert: Value =
        serde_json::from_str(&std::fs::read_to_string(&cert_path).expect("written"))
            .expect("json");
    assert_eq!(cert["S"], serde_json::json!([0, 2]));
    assert_eq!(cert["T"], serde_json::json!([0, 2]));
    assert_eq!(cert["product"], 4.0);
    assert_eq!(cert["witness"]["dim"], 4);
}

#[test]
fn extremal_above_the_cap_is_a_capacity_error() {
    let output = run(&["extremal", "--demo", "dft-pair", "--n", "9"]);
    assert_eq!(output.status.code(), Some(3));
    assert!(stderr(&output).contains("enumeration cap"));
}

#[test]
fn domain_answers_match_the_diagonal_criterion() {
    for (tail, expected) in [
        ("power:1:3", "in-domain"),
        ("power:1:1.5", "not-in-domain"),
        ("finite", "in-domain"),
    ] {
        let output = run(&["domain", "--r", "1", "--p", "1", "--tail", tail]);
        assert_eq!(output.status.code(), Some(0));
        assert_eq!(stdout(&output).trim(), expected, "tail {tail}");
    }
}

#[test]
fn csv_reports_use_the_pinned_column_order() {
    let dir = tempfile::tempdir().expect("tempdir");
    let csv = dir.path().join("report.csv");
    let output = run(&[
        "verify", "--demo", "dft-pair", "--n", "16", "--p", "2", "--comb", "--out",
        csv.to_str().expect("utf8 path"),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).expect("csv written");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("id,lhs,rhs,slack,holds,equality,q"));
    let row = lines.next().expect("at least one report row");
    assert!(row.starts_with("mixed_p,4.0000000000000000e0,"), "{row}");
    assert!(row.ends_with(",true,true,2.0000000000000000e0"), "{row}");
}

#[test]
fn transfers_and_parseval_flags_extend_the_report() {
    let dir = tempfile::tempdir().expect("tempdir");
    let csv = dir.path().join("full.csv");
    let output = run(&[
        "verify", "--demo", "dft-pair", "--n", "16", "--p", "1", "--comb", "--transfers",
        "--parseval", "--out", csv.to_str().expect("utf8 path"),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).expect("csv written");
    let ids: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|line| line.split(',').next().expect("id column"))
        .collect();
    assert_eq!(
        ids,
        vec![
            "product_1",
            "one_sided_1",
            "one_sided_1",
            "transfer_FI",
            "transfer_SI",
            "hilbert_chain"
        ]
    );
}

#[test]
fn transfers_are_rejected_at_interior_exponents() {
    let output = run(&[
        "verify", "--demo", "dft-pair", "--n", "4", "--p", "2", "--comb", "--transfers",
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("p = 1 or p = inf"));
}

#[test]
fn reports_are_byte_stable_across_runs() {
    let dir = tempfile::tempdir().expect("tempdir");
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    for path in [&first, &second] {
        let output = run(&[
            "verify", "--demo", "random", "--n", "5", "--seed", "11", "--p", "inf", "--random",
            "50", "--out", path.to_str().expect("utf8 path"),
        ]);
        assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    }
    let a = std::fs::read(&first).expect("first");
    let b = std::fs::read(&second).expect("second");
    assert_eq!(a, b);
}

#[test]
fn frame_tol_environment_variable_sets_the_tolerance() {
    let output = bin()
        .args(["verify", "--demo", "dft-pair", "--n", "16", "--p", "1", "--comb"])
        .env("FRAME_TOL", "1e-6")
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&output)).expect("json report");
    assert_eq!(report["command"]["tolerance"], 1e-6);

    let bad = bin()
        .args(["verify", "--demo", "dft-pair", "--n", "16", "--p", "1", "--comb"])
        .env("FRAME_TOL", "abc")
        .output()
        .expect("binary runs");
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn explicit_tol_flag_overrides_the_environment() {
    let output = bin()
        .args([
            "verify", "--demo", "dft-pair", "--n", "16", "--p", "1", "--comb", "--tol", "1e-8",
        ])
        .env("FRAME_TOL", "1e-4")
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&output)).expect("json report");
    assert_eq!(report["command"]["tolerance"], 1e-8);
}

#[test]
fn demo_list_names_every_family() {
    let output = run(&["demo-list"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    for name in [
        "identity",
        "dft-pair",
        "random",
        "parseval",
        "unbounded-diagonal",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn loaded_system_files_round_trip_through_verification() {
    // a weighted two-index pair written by hand: analysis rows are the
    // coordinate functionals, synthesis divides by the measure weights
    let dir = tempfile::tempdir().expect("tempdir");
    let system = r#"{
        "p": "1",
        "field": "real",
        "measure": {"kind": "finite", "n": 2, "weights": [0.5, 2.0]},
        "repr": {
            "kind": "dense",
            "analysis": [[1, 0], [0, 1]],
            "synthesis": [[2, 0], [0, 0.5]]
        }
    }"#;
    let path = write_file(dir.path(), "weighted.json", system);
    let vec_path = write_file(dir.path(), "x.json", r#"{"dim":2,"entries":[[0,1],[1,-3]]}"#);
    let output = run(&[
        "verify",
        "--system",
        path.to_str().expect("utf8 path"),
        "--cosystem",
        path.to_str().expect("utf8 path"),
        "--p",
        "1",
        "--vectors",
        vec_path.to_str().expect("utf8 path"),
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let report: Value = serde_json::from_str(&stdout(&output)).expect("json report");
    assert_eq!(report["summary"]["violations"], 0);
}

#[test]
fn unbounded_diagonal_demo_verifies_sparse_vectors() {
    let dir = tempfile::tempdir().expect("tempdir");
    let vec_path = write_file(
        dir.path(),
        "sparse.json",
        r#"{"dim":1000,"entries":[[3,1.5],[700,-2.25]]}"#,
    );
    let output = run(&[
        "verify", "--demo", "unbounded-diagonal", "--n", "1000", "--r", "1", "--p", "1",
        "--vectors", vec_path.to_str().expect("utf8 path"),
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let report: Value = serde_json::from_str(&stdout(&output)).expect("json report");
    // both supports have counting measure 2, coherences are 1
    let reports = &report["vectors"][0]["reports"];
    assert_eq!(reports[0]["id"], "product_1");
    assert_eq!(reports[0]["lhs"], 4.0);
    assert_eq!(reports[0]["rhs"], 1.0);
}
