//! The full reduction chain on a worked case: (2 2 2) over Z4 runs through
//! homogenization, lifting, row reduction, simulation, the identity form,
//! block reduction, the divisor split, circularization, and the join,
//! with every stage map certified by exhaustive enumeration.
//!
//! Run with: cargo run --example pipeline_walkthrough

use linconf::group::FiniteAbelianGroup;
use linconf::matrix::IntMatrix;
use linconf::pipeline::{run_full_pipeline, PipelineOptions};
use linconf::system::HomSystem;

fn main() {
    let z4 = FiniteAbelianGroup::normalize(&[4]).unwrap();
    let a = IntMatrix::from_i64_rows(&[vec![2, 2, 2]]);
    let sys = HomSystem::scalar(&a, &z4, &[z4.zero()]).unwrap();

    let trace = run_full_pipeline(&sys, &PipelineOptions::default()).unwrap();

    println!("stage chain:");
    for stage in &trace.stages {
        let cert = match &stage.cert {
            None => "-".to_string(),
            Some(c) => format!(
                "{}{}",
                if c.all_pass() { "certified" } else { "FAILED" },
                match c.mode {
                    linconf::pipeline::CertMode::Exhaustive => "",
                    linconf::pipeline::CertMode::Sampled => " (sampled)",
                }
            ),
        };
        println!(
            "  {:<18} {:>2} vars, {:>2} eqs, multiplicity {:>3}, solutions {:>6}  [{}]",
            stage.label,
            stage.system.num_vars(),
            stage.system.num_eqs(),
            stage.mu,
            stage
                .solution_count
                .as_ref()
                .map(|c| c.to_string())
                .unwrap_or_else(|| "?".into()),
            cert,
        );
        for note in &stage.notes {
            println!("      note: {}", note);
        }
    }

    if let Some(split) = &trace.split {
        println!("divisor split (block {}, modulus {}):", split.t, split.n);
        for entry in &split.entries {
            println!(
                "  index {:?}: kernel order {}, circular: {:?}, carrier {}",
                entry.kappa.map(|(i, j)| (i + 1, j + 1)).unwrap_or((1, 0)),
                entry.g,
                entry.circular_ok,
                entry
                    .f_report
                    .as_ref()
                    .map(|r| if r.all_pass() { "certified" } else { "FAILED" })
                    .unwrap_or("-"),
            );
        }
    }

    println!("final system circular: {}", trace.final_is_circular);
    println!("total multiplicity along the chain: {}", trace.total_mu);
    if let Some(composite) = &trace.composite_cert {
        println!(
            "composite map: surjective={}, uniform fibers={}, multiplicity matches={}",
            composite.surjective, composite.fibers_uniform, composite.mu_matches
        );
    }
}
