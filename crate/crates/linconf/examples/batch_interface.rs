//! The JSON batch interface driven in-process: the same dispatch the
//! `linconf` binary uses, exercised on a solve, a reduction trace, and a
//! certificate round trip.
//!
//! Run with: cargo run --example batch_interface

use linconf::cli::dispatch;

fn run(label: &str, args: &[&str], stdin_file: Option<(&str, &str)>) {
    if let Some((path, contents)) = stdin_file {
        std::fs::write(path, contents).unwrap();
    }
    let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let result = dispatch(&args);
    println!(
        "== {} -> status {}, payload keys: {:?}",
        label,
        result.status.as_str(),
        result
            .payload
            .as_object()
            .map(|o| o.keys().cloned().collect::<Vec<_>>())
            .unwrap_or_default()
    );
}

fn main() {
    let dir = std::env::temp_dir();
    let sys_path = dir.join("linconf_example_system.json");
    let sys_path = sys_path.to_str().unwrap();
    let system = r#"{
        "matrix": {"rows": 1, "cols": 3, "entries": [[1, 2, 2]]},
        "block": 1,
        "group": {"orders": [6]},
        "rhs": [[0]]
    }"#;

    run("solve", &["solve", "-i", sys_path, "--count-only"], Some((sys_path, system)));
    run("project x1", &["project", "-i", sys_path, "--var", "0"], None);
    run("partition", &["partition", "-i", sys_path], None);

    let out_path = dir.join("linconf_example_trace.json");
    let out_path = out_path.to_str().unwrap();
    run(
        "pipeline run",
        &["pipeline", "run", "-i", sys_path, "-o", out_path],
        None,
    );
    run("pipeline verify", &["pipeline", "verify", "-i", out_path], None);

    let circ_path = dir.join("linconf_example_circular.json");
    let circ_path = circ_path.to_str().unwrap();
    let circular = r#"{
        "matrix": {"rows": 1, "cols": 3, "entries": [[1, 1, 1]]},
        "block": 1,
        "group": {"orders": [5]},
        "rhs": [[0]]
    }"#;
    let cert_path = dir.join("linconf_example_cert.json");
    let cert_path = cert_path.to_str().unwrap();
    run(
        "represent build",
        &["represent", "build", "-i", circ_path, "-o", cert_path],
        Some((circ_path, circular)),
    );
    run(
        "represent verify",
        &["represent", "verify", "-i", cert_path, "--strong"],
        None,
    );
}
