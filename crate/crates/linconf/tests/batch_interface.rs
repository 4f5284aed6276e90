//! End-to-end checks of the JSON front end: statuses, exit-code contract,
//! and byte-identical output for identical inputs.

use linconf::cli::{dispatch, Status};
use serde_json::json;

fn args(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn write_temp(name: &str, contents: &str) -> String {
    let path = std::env::temp_dir().join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

const SUM_Z6: &str = r#"{
    "matrix": {"rows": 1, "cols": 3, "entries": [[1, 2, 2]]},
    "block": 1,
    "group": {"orders": [6]},
    "rhs": [[0]]
}"#;

#[test]
fn solve_reports_the_expected_count() {
    let input = write_temp("linconf_test_sum_z6.json", SUM_Z6);
    let result = dispatch(&args(&["solve", "-i", &input, "--count-only"]));
    assert_eq!(result.status, Status::Ok);
    assert_eq!(result.payload["count"], json!(36));
}

#[test]
fn snf_of_identity() {
    let input = write_temp(
        "linconf_test_id3.json",
        r#"{"rows":3,"cols":3,"entries":[[1,0,0],[0,1,0],[0,0,1]]}"#,
    );
    let result = dispatch(&args(&["snf", "-i", &input]));
    assert_eq!(result.status, Status::Ok);
    assert_eq!(result.payload["diag"], json!(["1", "1", "1"]));
}

#[test]
fn projection_subcommand() {
    let input = write_temp("linconf_test_proj.json", SUM_Z6);
    let result = dispatch(&args(&["project", "-i", &input, "--var", "0"]));
    assert_eq!(result.status, Status::Ok);
    assert_eq!(result.payload["values"], json!([[0], [2], [4]]));
}

#[test]
fn representation_round_trip_via_files() {
    let input = write_temp(
        "linconf_test_circ.json",
        r#"{"matrix":{"rows":1,"cols":3,"entries":[[1,1,1]]},
            "block":1,"group":{"orders":[5]},"rhs":[[0]]}"#,
    );
    let cert_path = std::env::temp_dir().join("linconf_test_cert.json");
    let cert_path = cert_path.to_str().unwrap();
    let built = dispatch(&args(&["represent", "build", "-i", &input, "-o", cert_path]));
    assert_eq!(built.status, Status::Ok);
    let verified = dispatch(&args(&["represent", "verify", "-i", cert_path, "--strong"]));
    assert_eq!(verified.status, Status::Ok);
    assert_eq!(verified.payload["all_pass"], json!(true));
    assert_eq!(verified.payload["copies"], json!(125));
}

#[test]
fn exit_code_contract() {
    // Usage errors.
    let result = dispatch(&args(&["no-such-command"]));
    assert_eq!(result.status, Status::Usage);
    assert_eq!(result.status.exit_code(), 64);
    let result = dispatch(&args(&["solve", "--bogus-flag"]));
    assert_eq!(result.status.exit_code(), 64);

    // Cap exceeded is its own exit code.
    let input = write_temp("linconf_test_cap.json", SUM_Z6);
    let result = dispatch(&args(&["solve", "-i", &input, "--cap", "2"]));
    assert_eq!(result.status, Status::CapExceeded);
    assert_eq!(result.status.exit_code(), 3);

    // Precondition failures map to 2.
    let bad = write_temp(
        "linconf_test_bad.json",
        r#"{"matrix":{"rows":1,"cols":2,"entries":[[1,2]]},
            "block":1,"group":{"orders":[2]},"rhs":[[0]]}"#,
    );
    let result = dispatch(&args(&["represent", "build", "-i", &bad]));
    assert_eq!(result.status.exit_code(), 2);

    // Invalid JSON maps to 2 as well.
    let garbage = write_temp("linconf_test_garbage.json", "not json");
    let result = dispatch(&args(&["solve", "-i", &garbage]));
    assert_eq!(result.status, Status::InvalidInput);
    assert_eq!(result.status.exit_code(), 2);
}

#[test]
fn identical_runs_are_byte_identical() {
    let input = write_temp("linconf_test_det.json", SUM_Z6);
    let out1 = std::env::temp_dir().join("linconf_test_out1.json");
    let out2 = std::env::temp_dir().join("linconf_test_out2.json");
    dispatch(&args(&[
        "pipeline",
        "run",
        "-i",
        &input,
        "-o",
        out1.to_str().unwrap(),
    ]));
    dispatch(&args(&[
        "pipeline",
        "run",
        "-i",
        &input,
        "-o",
        out2.to_str().unwrap(),
    ]));
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn permutation_text_form() {
    let input = write_temp(
        "linconf_test_perm.json",
        r#"{"tau": "1 0", "sigma": "2 0 1"}"#,
    );
    let result = dispatch(&args(&["perm", "occurrences", "-i", &input]));
    assert_eq!(result.status, Status::Ok);
    assert_eq!(result.payload["count"], json!(2));
    let result = dispatch(&args(&["perm", "check", "-i", &input]));
    assert_eq!(result.payload["consistent"], json!(true));
}

#[test]
fn corner_subcommand_double_counts() {
    let input = write_temp(
        "linconf_test_corners.json",
        r#"{"group": {"orders": [3]}, "m": 2,
            "subset": [[0,0],[1,0],[0,1],[1,1]]}"#,
    );
    let result = dispatch(&args(&["apps", "corners", "-i", &input]));
    assert_eq!(result.status, Status::Ok);
    assert_eq!(result.payload["agree"], json!(true));
}
