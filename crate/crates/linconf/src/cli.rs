//! Batch front end: JSON in, JSON out, deterministic for fixed inputs and
//! flags. Progress and timing go to standard error only. Exit codes:
//! 0 ok, 2 precondition or invalid input, 3 cap exceeded, 64 usage.

use crate::error::Error;
use crate::group::DEFAULT_ENUM_CAP;
use crate::hypergraph::{
    build_k_from_circular, greedy_edge_cover, removal_deletion, verify_rp_properties, RpMode,
};
use crate::json::{
    domains_from_wire, domains_to_wire, trace_to_value, CertificateWire, MapWire, MatrixWire,
    SystemWire,
};
use crate::matrix::{build_band_annihilator, smith_normal_form};
use crate::perm::{copies_match_occurrences, occurrences, Permutation};
use crate::pipeline::{
    partition_by_independent_vectors, run_full_pipeline, verify_equivalence, PipelineOptions,
    VerifyOptions,
};
use crate::system::{project_solutions, HomSystem};
use num_integer::Integer;
use serde_json::{json, Value};
use std::io::Read;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    PreconditionFailed,
    CapExceeded,
    InvalidInput,
    Usage,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::PreconditionFailed => "precondition-failed",
            Status::CapExceeded => "cap-exceeded",
            Status::InvalidInput => "invalid-input",
            Status::Usage => "usage",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::PreconditionFailed | Status::InvalidInput => 2,
            Status::CapExceeded => 3,
            Status::Usage => 64,
        }
    }
}

#[derive(Debug)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
    pub timing: std::time::Duration,
}

struct Flags {
    input: Option<String>,
    output: Option<String>,
    cap: u64,
    seed: u64,
    threads: usize,
    count_only: bool,
    strong: bool,
    lower_bound: bool,
    probes: u64,
    var: Option<usize>,
    modulus: Option<u64>,
}

const USAGE: &str = "usage: linconf <command> [flags]

commands:
  snf                   Smith normal form with unimodular witnesses
  dets                  determinantal divisors of an integer matrix
  solve                 enumerate the solutions of a system
  project               project the solution set onto one variable
  partition             decompose solutions by independent vectors
  pipeline run          reduce a system to its circular joined form
  pipeline verify       re-certify the stage maps of a trace
  represent build       host hypergraph and certificate of a circular system
  represent verify      check the representability properties
  represent remove      deletion rule from an edge cover
  perm occurrences      pattern occurrences in a permutation
  perm check            copies versus occurrences census
  apps corners          corner configuration census
  apps homothetic       homothetic configuration system

flags:
  -i FILE     read JSON input from FILE (default stdin)
  -o FILE     write JSON output to FILE (default stdout)
  --cap N     enumeration cap (default 1000000)
  --seed S    sampling seed (default 0)
  --probes N  sampled certification probes (default 10000)
  --threads N worker cap (accepted; execution is sequential)
  --var I     variable index for `project`
  --modulus N circularity modulus override for `represent build`
  --count-only  suppress solution listings
  --strong    check the strong property in `represent verify`
  --lower-bound  verify densities against the floor instead of exactly
";

fn parse_flags(args: &[String]) -> Result<Flags, String> {
    let mut flags = Flags {
        input: None,
        output: None,
        cap: DEFAULT_ENUM_CAP,
        seed: 0,
        threads: 1,
        count_only: false,
        strong: false,
        lower_bound: false,
        probes: 10_000,
        var: None,
        modulus: None,
    };
    let mut i = 0;
    while i < args.len() {
        let arg = &args[i];
        let mut take = |name: &str| -> Result<String, String> {
            i += 1;
            args.get(i)
                .cloned()
                .ok_or_else(|| format!("flag {} needs a value", name))
        };
        match arg.as_str() {
            "-i" => flags.input = Some(take("-i")?),
            "-o" => flags.output = Some(take("-o")?),
            "--cap" => flags.cap = take("--cap")?.parse().map_err(|_| "bad --cap".to_string())?,
            "--seed" => flags.seed = take("--seed")?.parse().map_err(|_| "bad --seed".to_string())?,
            "--probes" => {
                flags.probes = take("--probes")?.parse().map_err(|_| "bad --probes".to_string())?
            }
            "--threads" => {
                flags.threads = take("--threads")?.parse().map_err(|_| "bad --threads".to_string())?
            }
            "--var" => flags.var = Some(take("--var")?.parse().map_err(|_| "bad --var".to_string())?),
            "--modulus" => {
                flags.modulus =
                    Some(take("--modulus")?.parse().map_err(|_| "bad --modulus".to_string())?)
            }
            "--count-only" => flags.count_only = true,
            "--strong" => flags.strong = true,
            "--lower-bound" => flags.lower_bound = true,
            other => return Err(format!("unknown flag {:?}", other)),
        }
        i += 1;
    }
    Ok(flags)
}

fn read_input(flags: &Flags) -> Result<Value, Error> {
    let text = match &flags.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {}", path, e)))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::InvalidInput(format!("cannot read stdin: {}", e)))?;
            buf
        }
    };
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("bad JSON: {}", e)))
}

fn get<T: serde::de::DeserializeOwned>(value: &Value, field: &str) -> Result<T, Error> {
    let inner = value
        .get(field)
        .ok_or_else(|| Error::InvalidInput(format!("missing field {:?}", field)))?;
    serde_json::from_value(inner.clone())
        .map_err(|e| Error::InvalidInput(format!("bad field {:?}: {}", field, e)))
}

fn parse_system(value: &Value) -> Result<HomSystem, Error> {
    let wire: SystemWire = serde_json::from_value(value.clone())
        .map_err(|e| Error::InvalidInput(format!("bad system: {}", e)))?;
    wire.to_system()
}

fn parse_permutation(value: &Value) -> Result<Permutation, Error> {
    match value {
        Value::String(s) => Permutation::parse(s),
        other => {
            let values: Vec<usize> = get(other, "values")?;
            Permutation::new(values)
        }
    }
}

fn solutions_payload(sys: &HomSystem, tuples: &[Vec<u64>], count_only: bool) -> Value {
    let mut obj = json!({ "count": tuples.len() });
    if !count_only {
        let listed: Vec<Vec<Vec<u64>>> = tuples
            .iter()
            .map(|t| {
                (0..sys.num_vars())
                    .map(|i| sys.var_slice(t, i).to_vec())
                    .collect()
            })
            .collect();
        obj["solutions"] = serde_json::to_value(listed).unwrap();
    }
    obj
}

fn command(cmd: &[&str], flags: &Flags) -> Result<Value, Error> {
    match cmd {
        ["snf"] => {
            let input = read_input(flags)?;
            let wire: MatrixWire = serde_json::from_value(input)
                .map_err(|e| Error::InvalidInput(format!("bad matrix: {}", e)))?;
            let a = wire.to_matrix()?;
            let snf = smith_normal_form(&a);
            Ok(json!({
                "u": MatrixWire::from_matrix(&snf.u),
                "s": MatrixWire::from_matrix(&snf.s),
                "v": MatrixWire::from_matrix(&snf.v),
                "diag": snf.diag.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            }))
        }
        ["dets"] => {
            let input = read_input(flags)?;
            let wire: MatrixWire = serde_json::from_value(input)
                .map_err(|e| Error::InvalidInput(format!("bad matrix: {}", e)))?;
            let a = wire.to_matrix()?;
            let r = a.rows().min(a.cols());
            let mut divisors = Vec::with_capacity(r);
            for i in 1..=r {
                divisors.push(a.determinantal_divisor(i)?.to_string());
            }
            Ok(json!({ "determinantal": divisors }))
        }
        ["solve"] => {
            let input = read_input(flags)?;
            let sys = match input.get("system") {
                Some(inner) => parse_system(inner)?,
                None => parse_system(&input)?,
            };
            let domains = match input.get("domains") {
                None | Some(Value::Null) => None,
                Some(d) => {
                    let wire: Vec<Vec<Vec<u64>>> = serde_json::from_value(d.clone())
                        .map_err(|e| Error::InvalidInput(format!("bad domains: {}", e)))?;
                    Some(domains_from_wire(&wire))
                }
            };
            let sols = sys.enumerate_solutions(domains.as_deref(), flags.cap)?;
            Ok(solutions_payload(&sys, &sols.tuples, flags.count_only))
        }
        ["project"] => {
            let input = read_input(flags)?;
            let sys = match input.get("system") {
                Some(inner) => parse_system(inner)?,
                None => parse_system(&input)?,
            };
            let var = flags
                .var
                .or_else(|| input.get("var").and_then(|v| v.as_u64()).map(|v| v as usize))
                .ok_or_else(|| Error::InvalidInput("give a variable with --var or \"var\"".into()))?;
            let sols = sys.enumerate_solutions(None, flags.cap)?;
            let proj = project_solutions(&sys, &sols, var)?;
            Ok(json!({ "var": var, "values": proj }))
        }
        ["partition"] => {
            let input = read_input(flags)?;
            let sys = parse_system(&input)?;
            let report = partition_by_independent_vectors(&sys, flags.cap)?;
            Ok(json!({
                "disjoint": report.disjoint,
                "union_matches": report.union_matches,
                "pieces": report
                    .piece_counts
                    .iter()
                    .map(|(b, c)| json!({ "b": b, "count": c }))
                    .collect::<Vec<_>>(),
            }))
        }
        ["pipeline", "run"] => {
            let input = read_input(flags)?;
            let sys = parse_system(&input)?;
            let opts = PipelineOptions {
                cap: flags.cap,
                probes: flags.probes,
                seed: flags.seed,
                check_constancy: true,
            };
            let trace = run_full_pipeline(&sys, &opts)?;
            Ok(trace_to_value(&trace))
        }
        ["pipeline", "verify"] => {
            let input = read_input(flags)?;
            let stages = input
                .get("stages")
                .and_then(|s| s.as_array())
                .ok_or_else(|| Error::InvalidInput("trace needs a stage list".into()))?;
            let mut systems: Vec<HomSystem> = Vec::new();
            let mut reports = Vec::new();
            for stage in stages {
                let sys = parse_system(
                    stage
                        .get("system")
                        .ok_or_else(|| Error::InvalidInput("stage without system".into()))?,
                )?;
                let map = match stage.get("map") {
                    None | Some(Value::Null) => None,
                    Some(m) => {
                        let wire: MapWire = serde_json::from_value(m.clone())
                            .map_err(|e| Error::InvalidInput(format!("bad map: {}", e)))?;
                        Some(wire.to_map()?)
                    }
                };
                let label: String = get(stage, "label")?;
                match (map, systems.last()) {
                    (Some(map), Some(prev)) => {
                        let vopts = VerifyOptions {
                            cap: flags.cap,
                            check_coordinate_constancy: false,
                            target_domains: None,
                        };
                        let outcome = match verify_equivalence(&map, prev, &sys, &vopts) {
                            Ok(report) => json!({
                                "label": label,
                                "certified": "exhaustive",
                                "passed": report.all_pass(),
                                "mu": map.mu.to_string(),
                                "mu_observed": report.mu_observed.map(|m| m.to_string()),
                            }),
                            Err(Error::CapExceeded { .. }) => json!({
                                "label": label,
                                "certified": "skipped",
                                "passed": Value::Null,
                            }),
                            Err(e) => json!({
                                "label": label,
                                "certified": "error",
                                "passed": false,
                                "error": e.to_string(),
                            }),
                        };
                        reports.push(outcome);
                    }
                    _ => reports.push(json!({ "label": label, "certified": "none" })),
                }
                systems.push(sys);
            }
            let all_passed = reports
                .iter()
                .all(|r| r.get("passed").map_or(true, |p| p.as_bool().unwrap_or(true)));
            Ok(json!({ "stages": reports, "all_passed": all_passed }))
        }
        ["represent", "build"] => {
            let input = read_input(flags)?;
            let sys = parse_system(&input)?;
            let n = flags.modulus.unwrap_or_else(|| {
                sys.col_orders.iter().fold(1u64, |acc, &o| acc.lcm(&o))
            });
            let width = sys.var_spans.first().map_or(1, |&(_, l)| l);
            let band = build_band_annihilator(&sys.matrix, width, n)?;
            let (_, cert) = build_k_from_circular(&sys, &band, n, flags.cap)?;
            Ok(serde_json::to_value(CertificateWire::from_cert(&cert)).unwrap())
        }
        ["represent", "verify"] => {
            let input = read_input(flags)?;
            let wire: CertificateWire = serde_json::from_value(input)
                .map_err(|e| Error::InvalidInput(format!("bad certificate: {}", e)))?;
            let cert = wire.to_cert()?;
            let mode = if flags.lower_bound {
                RpMode::LowerBound
            } else {
                RpMode::Exact
            };
            let report = verify_rp_properties(&cert, mode, flags.strong, flags.cap)?;
            Ok(json!({
                "rp1": report.rp1,
                "rp2_domain": report.rp2_domain,
                "rp2_sizes": report.rp2_sizes,
                "rp2_surjective": report.rp2_surjective,
                "rp3": report.rp3,
                "rp4": report.rp4,
                "all_pass": report.all_pass(),
                "lambda": crate::json::rational_to_string(&report.lambda),
                "copies": report.copy_count,
                "classes": report.class_count,
                "counterexamples": report.counterexamples,
            }))
        }
        ["represent", "remove"] => {
            let input = read_input(flags)?;
            let wire: CertificateWire = get(&input, "certificate")?;
            let cert = wire.to_cert()?;
            let domain_wire: Vec<Vec<Vec<u64>>> = get(&input, "domains")?;
            let domains = domains_from_wire(&domain_wire);
            let cover: Vec<(usize, Vec<usize>)> = match input.get("cover") {
                None | Some(Value::Null) => {
                    let k_x = cert.k_graph.restrict_by_labels(&domains);
                    greedy_edge_cover(&cert.h_graph, &k_x, flags.cap)?
                }
                Some(c) => serde_json::from_value(c.clone())
                    .map_err(|e| Error::InvalidInput(format!("bad cover: {}", e)))?,
            };
            let outcome = removal_deletion(&cert, &domains, &cover, flags.cap)?;
            Ok(json!({
                "cover_size": outcome.cover_size,
                "thresholds": outcome
                    .thresholds
                    .iter()
                    .map(crate::json::rational_to_string)
                    .collect::<Vec<_>>(),
                "xprime": domains_to_wire(&outcome.xprime),
                "verified": outcome.verified,
            }))
        }
        ["perm", "occurrences"] => {
            let input = read_input(flags)?;
            let tau = parse_permutation(
                input
                    .get("tau")
                    .ok_or_else(|| Error::InvalidInput("missing \"tau\"".into()))?,
            )?;
            let sigma = parse_permutation(
                input
                    .get("sigma")
                    .ok_or_else(|| Error::InvalidInput("missing \"sigma\"".into()))?,
            )?;
            let occ = occurrences(&tau, &sigma)?;
            Ok(json!({ "count": occ.len(), "occurrences": occ }))
        }
        ["perm", "check"] => {
            let input = read_input(flags)?;
            let tau = parse_permutation(
                input
                    .get("tau")
                    .ok_or_else(|| Error::InvalidInput("missing \"tau\"".into()))?,
            )?;
            let sigma = parse_permutation(
                input
                    .get("sigma")
                    .ok_or_else(|| Error::InvalidInput("missing \"sigma\"".into()))?,
            )?;
            let census = copies_match_occurrences(&tau, &sigma, flags.cap)?;
            Ok(json!({
                "copies": census.copies.len(),
                "occurrences": census.occurrences.len(),
                "all_monotone": census.all_monotone,
                "sets_match": census.sets_match,
                "consistent": census.consistent(),
            }))
        }
        ["apps", "corners"] => {
            let input = read_input(flags)?;
            let group_wire: crate::json::GroupWire = get(&input, "group")?;
            let group = group_wire.to_group()?;
            let m: usize = get(&input, "m")?;
            let sys = crate::apps::build_corner_system(&group, m)?;
            let subset: crate::system::VarDomain = match input.get("subset") {
                None | Some(Value::Null) => crate::system::full_domain(&sys, 0),
                Some(Value::Object(obj)) if obj.contains_key("sample") => {
                    let size: usize = get(&input["subset"], "sample")
                        .and_then(|s: Value| get(&s, "size"))
                        .unwrap_or(0);
                    let point_orders: Vec<u64> = (0..m * group.rank())
                        .map(|c| group.orders()[c % group.rank()])
                        .collect();
                    crate::apps::sample_subset(&point_orders, size, flags.seed)
                }
                Some(s) => {
                    let pts: Vec<Vec<u64>> = serde_json::from_value(s.clone())
                        .map_err(|e| Error::InvalidInput(format!("bad subset: {}", e)))?;
                    pts.into_iter().collect()
                }
            };
            let census = crate::apps::count_corners(&sys, &group, m, &subset, flags.cap)?;
            Ok(json!({
                "system": SystemWire::from_system(&sys),
                "hits": census.hits,
                "hits_by_enumeration": census.hits_by_enumeration,
                "total_scanned": census.total,
                "agree": census.hits == census.hits_by_enumeration,
            }))
        }
        ["apps", "homothetic"] => {
            let input = read_input(flags)?;
            let group_wire: crate::json::GroupWire = get(&input, "group")?;
            let group = group_wire.to_group()?;
            let subgroup_gens: Vec<Vec<Vec<u64>>> = get(&input, "subgroups")?;
            let phi_wires: Vec<MatrixWire> = get(&input, "phis")?;
            let phis: Vec<crate::matrix::IntMatrix> = phi_wires
                .iter()
                .map(|w| w.to_matrix())
                .collect::<Result<_, _>>()?;
            let sys =
                crate::apps::build_homothetic_system(&group, &subgroup_gens, &phis, flags.cap)?;
            let sols = sys.enumerate_solutions(None, flags.cap)?;
            Ok(json!({
                "system": SystemWire::from_system(&sys),
                "count": sols.count(),
            }))
        }
        _ => Err(Error::InvalidInput("unreachable".into())),
    }
}

/// Parses and runs one invocation; everything after the subcommand words is
/// treated as flags.
pub fn dispatch(args: &[String]) -> CommandResult {
    let start = Instant::now();
    let known: &[&[&str]] = &[
        &["snf"],
        &["dets"],
        &["solve"],
        &["project"],
        &["partition"],
        &["pipeline", "run"],
        &["pipeline", "verify"],
        &["represent", "build"],
        &["represent", "verify"],
        &["represent", "remove"],
        &["perm", "occurrences"],
        &["perm", "check"],
        &["apps", "corners"],
        &["apps", "homothetic"],
    ];
    let words: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
    let cmd = known
        .iter()
        .find(|&&k| words.len() >= k.len() && &words[..k.len()] == k);
    let cmd = match cmd {
        Some(c) => c,
        None => {
            return CommandResult {
                status: Status::Usage,
                payload: json!({ "status": "usage", "usage": USAGE }),
                timing: start.elapsed(),
            };
        }
    };
    let flags = match parse_flags(&args[cmd.len()..]) {
        Ok(f) => f,
        Err(msg) => {
            return CommandResult {
                status: Status::Usage,
                payload: json!({ "status": "usage", "error": msg, "usage": USAGE }),
                timing: start.elapsed(),
            };
        }
    };
    if flags.threads > 1 {
        eprintln!("note: execution is sequential; --threads capped at 1");
    }
    match command(cmd, &flags) {
        Ok(mut payload) => {
            if let Value::Object(obj) = &mut payload {
                obj.insert("status".into(), Value::String("ok".into()));
            }
            let result = CommandResult {
                status: Status::Ok,
                payload,
                timing: start.elapsed(),
            };
            write_output(&flags, &result);
            result
        }
        Err(e) => {
            let status = match &e {
                Error::CapExceeded { .. } => Status::CapExceeded,
                Error::InvalidGroup(_) | Error::InvalidInput(_) => Status::InvalidInput,
                _ => Status::PreconditionFailed,
            };
            let result = CommandResult {
                status,
                payload: json!({ "status": status.as_str(), "error": e.to_string() }),
                timing: start.elapsed(),
            };
            write_output(&flags, &result);
            result
        }
    }
}

fn write_output(flags: &Flags, result: &CommandResult) {
    let text = serde_json::to_string_pretty(&result.payload).unwrap();
    match &flags.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("cannot write {}: {}", path, e);
            }
        }
        None => println!("{}", text),
    }
    eprintln!(
        "{} in {:.3}s",
        result.status.as_str(),
        result.timing.as_secs_f64()
    );
}

pub fn run_main() -> i32 {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let result = dispatch(&args);
    if result.status == Status::Usage {
        eprintln!("{}", USAGE);
    }
    result.status.exit_code()
}
