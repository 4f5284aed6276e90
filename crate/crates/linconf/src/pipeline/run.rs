//! End-to-end reduction: pads and homogenizes the input, lifts it to the
//! homocyclic cover, normalizes rows, rewrites in identity-headed form,
//! splits by the divisor grid, circularizes, joins, and certifies every
//! step by enumeration (falling back to sampled probes past the cap).

use super::{
    block_row_reduce, circularize, dehomogenize, determinantal_to_identity, join_systems,
    lift_to_homocyclic, pad_stage, reduce_equations, row_reduce_stage, sampled_certificate,
    simulate_independent_vectors, split_to_j_systems, verify_equivalence, CertMode, Dehomogenized,
    EquivalenceMap, EquivalenceReport, PipelineTrace, Stage, StageOut, VerifyOptions,
};
use crate::error::{Error, Result};
use crate::group::DEFAULT_ENUM_CAP;
use crate::matrix::is_block_n_circular;
use crate::system::HomSystem;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub cap: u64,
    pub probes: u64,
    pub seed: u64,
    /// Check the per-coordinate fiber constancy hypothesis on the join map.
    pub check_constancy: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            cap: DEFAULT_ENUM_CAP,
            probes: 10_000,
            seed: 0,
            check_constancy: true,
        }
    }
}

fn certify(
    map: &EquivalenceMap,
    prev: &HomSystem,
    next: &HomSystem,
    opts: &PipelineOptions,
    constancy: bool,
) -> (Option<EquivalenceReport>, Vec<String>) {
    let vopts = VerifyOptions {
        cap: opts.cap,
        check_coordinate_constancy: constancy,
        target_domains: None,
    };
    match verify_equivalence(map, prev, next, &vopts) {
        Ok(report) => (Some(report), Vec::new()),
        Err(Error::CapExceeded { needed, .. }) => {
            match sampled_certificate(map, prev, next, opts.probes, opts.seed, opts.cap) {
                Ok(report) => (
                    Some(report),
                    vec![format!(
                        "exhaustive certification needs {} enumerations; sampled instead",
                        needed
                    )],
                ),
                Err(e) => (None, vec![format!("certification unavailable: {}", e)]),
            }
        }
        Err(e) => (None, vec![format!("certification failed to run: {}", e)]),
    }
}

fn push_stage(
    stages: &mut Vec<Stage>,
    label: &str,
    out: StageOut,
    opts: &PipelineOptions,
    constancy: bool,
) {
    let prev = &stages.last().unwrap().system;
    let (cert, mut notes) = certify(&out.map, prev, &out.system, opts, constancy);
    notes.extend(out.notes);
    let count = out.system.count_solutions(opts.cap).ok();
    stages.push(Stage {
        label: label.to_string(),
        mu: out.map.mu.clone(),
        map_to_prev: Some(out.map),
        cert,
        notes,
        solution_count: count,
        system: out.system,
    });
}

pub fn run_full_pipeline(sys: &HomSystem, opts: &PipelineOptions) -> Result<PipelineTrace> {
    let mut stages = vec![Stage {
        label: "initial".into(),
        mu: BigUint::one(),
        map_to_prev: None,
        cert: None,
        notes: sys.repair_log.clone(),
        solution_count: sys.count_solutions(opts.cap).ok(),
        system: sys.clone(),
    }];

    match dehomogenize(&stages.last().unwrap().system, opts.cap)? {
        Dehomogenized::NoSolution => {
            return Ok(PipelineTrace {
                stages,
                split: None,
                final_is_circular: false,
                no_solution: true,
                total_mu: BigUint::one(),
                composite_cert: None,
            });
        }
        Dehomogenized::Shifted(out) => push_stage(&mut stages, "dehomogenize", out, opts, false),
    }

    let lifted = lift_to_homocyclic(&stages.last().unwrap().system)?;
    push_stage(&mut stages, "lift", lifted, opts, false);

    if let Some(out) = reduce_equations(&stages.last().unwrap().system)? {
        push_stage(&mut stages, "reduce-equations", out, opts, false);
    }
    if let Some(out) = pad_stage(&stages.last().unwrap().system)? {
        push_stage(&mut stages, "pad", out, opts, false);
    }

    let (rr, diag) = row_reduce_stage(&stages.last().unwrap().system)?;
    push_stage(&mut stages, "row-reduce", rr, opts, false);

    let sim = simulate_independent_vectors(&stages.last().unwrap().system, &diag)?;
    push_stage(&mut stages, "simulate", sim, opts, false);

    let idf = determinantal_to_identity(&stages.last().unwrap().system)?;
    push_stage(&mut stages, "identity-form", idf, opts, false);

    let (brr, divisors) = block_row_reduce(&stages.last().unwrap().system)?;
    push_stage(&mut stages, "block-row-reduce", brr, opts, false);
    let a6 = stages.last().unwrap().system.clone();

    let mut family = split_to_j_systems(&a6, &divisors)?;
    let (t, n) = (family.t, family.n);
    // Certify the carrier maps of the split family against the restricted
    // parent solution sets.
    let mut split_reports: Vec<(Option<(usize, usize)>, Option<EquivalenceReport>)> = Vec::new();
    for entry in &family.entries {
        let vopts = VerifyOptions {
            cap: opts.cap,
            check_coordinate_constancy: false,
            target_domains: Some(entry.parent_domains.clone()),
        };
        let report = verify_equivalence(&entry.f_map, &a6, &entry.j_system, &vopts).ok();
        split_reports.push((entry.kappa, report));
    }
    for entry in family.entries.iter_mut() {
        circularize(entry, t, n)?;
    }
    // Certify the circular extensions as bijective projections.
    let mut circ_reports: Vec<(Option<(usize, usize)>, Option<EquivalenceReport>)> = Vec::new();
    for entry in &family.entries {
        let jbar = entry.jbar_system.as_ref().unwrap();
        let vopts = VerifyOptions {
            cap: opts.cap,
            check_coordinate_constancy: false,
            target_domains: None,
        };
        let report = match verify_equivalence(
            entry.circ_map.as_ref().unwrap(),
            &entry.j_system,
            jbar,
            &vopts,
        ) {
            Ok(r) => Some(r),
            Err(Error::CapExceeded { .. }) => sampled_certificate(
                entry.circ_map.as_ref().unwrap(),
                &entry.j_system,
                jbar,
                opts.probes,
                opts.seed,
                opts.cap,
            )
            .ok(),
            Err(_) => None,
        };
        circ_reports.push((entry.kappa, report));
    }

    let (joined, join_map) = join_systems(&family, &divisors)?;
    let join_out = StageOut {
        system: joined,
        map: join_map,
        notes: vec![format!(
            "joined {} active systems",
            family.entries.iter().filter(|e| e.g > 1).count()
        )],
    };
    push_stage(&mut stages, "join", join_out, opts, opts.check_constancy);

    let final_sys = &stages.last().unwrap().system;
    let final_is_circular = is_block_n_circular(&final_sys.matrix, 1, n)?;

    let total_mu: BigUint = stages.iter().map(|s| s.mu.clone()).product();

    // Composite map: walk the chain from the final system back to the
    // initial one and certify the composite fibers when feasible.
    let composite_cert = certify_composite(&stages, opts);

    // Attach the split/circ reports into the family entries for the trace.
    let mut split = family;
    for (entry, (_, rep)) in split.entries.iter_mut().zip(split_reports) {
        entry.f_report = rep;
    }
    for (entry, (_, rep)) in split.entries.iter_mut().zip(circ_reports) {
        entry.circ_report = rep;
    }

    Ok(PipelineTrace {
        stages,
        split: Some(split),
        final_is_circular,
        no_solution: false,
        total_mu,
        composite_cert,
    })
}

fn certify_composite(stages: &[Stage], opts: &PipelineOptions) -> Option<EquivalenceReport> {
    if stages.len() < 2 {
        return None;
    }
    if stages
        .iter()
        .any(|s| s.cert.as_ref().map_or(s.map_to_prev.is_some(), |c| c.mode != CertMode::Exhaustive))
    {
        return None;
    }
    let initial = &stages[0].system;
    let final_sys = &stages.last().unwrap().system;
    let target = initial.enumerate_solutions(None, opts.cap).ok()?;
    let target_set: std::collections::HashSet<Vec<u64>> =
        target.tuples.iter().cloned().collect();
    let mut fibers: std::collections::HashMap<Vec<u64>, u64> = Default::default();
    let mut domain_ok = true;
    let mut source_count = BigUint::from(0u32);
    let reduced_maps: Vec<super::ReducedMap> = (1..stages.len())
        .map(|i| {
            super::ReducedMap::new(
                stages[i].map_to_prev.as_ref().unwrap(),
                &stages[i - 1].system,
                &stages[i].system,
            )
        })
        .collect();
    for sol in final_sys.iter_solutions(opts.cap).ok()? {
        source_count += 1u32;
        let mut cur = sol;
        for i in (1..stages.len()).rev() {
            cur = reduced_maps[i - 1].apply(&cur);
        }
        if !target_set.contains(&cur) {
            domain_ok = false;
            continue;
        }
        *fibers.entry(cur).or_insert(0) += 1;
    }
    let total_mu: BigUint = stages.iter().map(|s| s.mu.clone()).product();
    let surjective = fibers.len() == target_set.len();
    let fiber_min = fibers.values().min().copied();
    let fiber_max = fibers.values().max().copied();
    let fibers_uniform = fiber_min == fiber_max && fiber_min.is_some();
    let mu_observed = if fibers_uniform {
        fiber_min.map(BigUint::from)
    } else {
        None
    };
    let mu_matches = mu_observed.as_ref() == Some(&total_mu);
    let target_count = BigUint::from(target_set.len() as u64);
    let count_identity = &total_mu * &target_count == source_count;
    Some(EquivalenceReport {
        mode: CertMode::Exhaustive,
        domain_ok,
        surjective,
        fibers_uniform,
        fiber_min,
        fiber_max,
        mu_observed,
        mu_declared: total_mu,
        mu_matches,
        coordinate_constancy: None,
        source_count,
        target_count,
        count_identity,
        probes: None,
        violations: Vec::new(),
    })
}

/// Decomposition of the homogeneous solution set as a disjoint union of
/// inhomogeneous solution sets of the gcd-divided system, one per value of
/// the independent vector ranging over the kernel groups of the row gcds.
#[derive(Debug)]
pub struct PartitionReport {
    pub piece_counts: Vec<(Vec<u64>, usize)>,
    pub disjoint: bool,
    pub union_matches: bool,
}

pub fn partition_by_independent_vectors(sys: &HomSystem, cap: u64) -> Result<PartitionReport> {
    let (_, n) = sys
        .uniform_block()
        .ok_or_else(|| Error::Precondition("partition check needs a uniform system".into()))?;
    if !sys.rhs_is_zero() {
        return Err(Error::Precondition("partition check needs a homogeneous system".into()));
    }
    // More equations than variables: drop the redundant ones first.
    let working = match reduce_equations(sys)? {
        Some(out) => out.system,
        None => sys.clone(),
    };
    let (rr, diag) = row_reduce_stage(&working)?;
    let divided = crate::matrix::divide_rows_by_gcd(&rr.system.matrix, &diag)?;
    let whole = sys.enumerate_solutions(None, cap)?;

    // Enumerate the product of kernels P_d(Z_n) across scalar rows.
    let kernels: Vec<Vec<u64>> = diag
        .iter()
        .map(|d| {
            let g = d.gcd(&num_bigint::BigInt::from(n));
            let g = num_traits::ToPrimitive::to_u64(&g).unwrap();
            let step = n / g;
            (0..g).map(|i| i * step).collect()
        })
        .collect();
    let mut b = vec![0usize; kernels.len()];
    let mut piece_counts = Vec::new();
    let mut seen: BTreeMap<Vec<u64>, Vec<u64>> = BTreeMap::new();
    let mut disjoint = true;
    loop {
        let rhs: Vec<u64> = b.iter().zip(&kernels).map(|(&i, k)| k[i]).collect();
        let piece = HomSystem::new(
            divided.clone(),
            rhs.clone(),
            rr.system.row_moduli.clone(),
            rr.system.col_orders.clone(),
            rr.system.var_spans.clone(),
            rr.system.eq_spans.clone(),
        )?;
        let sols = piece.enumerate_solutions(None, cap)?;
        for s in &sols.tuples {
            if let Some(other) = seen.insert(s.clone(), rhs.clone()) {
                if other != rhs {
                    disjoint = false;
                }
            }
        }
        piece_counts.push((rhs, sols.count()));
        let mut pos = kernels.len();
        let advanced = loop {
            if pos == 0 {
                break false;
            }
            pos -= 1;
            b[pos] += 1;
            if b[pos] < kernels[pos].len() {
                break true;
            }
            b[pos] = 0;
        };
        if !advanced {
            break;
        }
    }
    let union_matches = seen.len() == whole.count()
        && whole.tuples.iter().all(|t| seen.contains_key(t));
    Ok(PartitionReport {
        piece_counts,
        disjoint,
        union_matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteAbelianGroup;
    use crate::matrix::IntMatrix;

    fn scalar_sys(rows: &[Vec<i64>], n: u64) -> HomSystem {
        let g = FiniteAbelianGroup::normalize(&[n]).unwrap();
        let m = IntMatrix::from_i64_rows(rows);
        HomSystem::scalar(&m, &g, &vec![g.zero(); rows.len()]).unwrap()
    }

    #[test]
    fn full_pipeline_on_cyclic_sum() {
        let sys = scalar_sys(&[vec![1, 1, 1]], 5);
        let trace = run_full_pipeline(&sys, &PipelineOptions::default()).unwrap();
        assert!(!trace.no_solution);
        assert!(trace.final_is_circular);
        assert!(trace.all_stages_pass(), "some stage failed");
        assert!(trace.all_exhaustive());
        let composite = trace.composite_cert.as_ref().expect("composite certified");
        assert!(composite.mu_matches && composite.count_identity);
    }

    #[test]
    fn full_pipeline_worked_case() {
        // (2 2 2) over Z4: multiplicity 2 at the simulation stage.
        let sys = scalar_sys(&[vec![2, 2, 2]], 4);
        let trace = run_full_pipeline(&sys, &PipelineOptions::default()).unwrap();
        assert!(trace.all_stages_pass());
        let sim = trace
            .stages
            .iter()
            .find(|s| s.label == "simulate")
            .unwrap();
        assert_eq!(sim.mu, BigUint::from(2u32));
        assert!(trace.final_is_circular);
    }

    #[test]
    fn pipeline_pads_small_systems() {
        let sys = scalar_sys(&[vec![1, 1]], 3);
        let trace = run_full_pipeline(&sys, &PipelineOptions::default()).unwrap();
        let pad = trace.stages.iter().find(|s| s.label == "pad").unwrap();
        assert_eq!(pad.system.num_vars(), 4);
        assert_eq!(pad.mu, BigUint::from(9u32));
        assert!(trace.all_stages_pass());
    }

    #[test]
    fn pipeline_flags_unsolvable_systems() {
        let g = FiniteAbelianGroup::normalize(&[4]).unwrap();
        let m = IntMatrix::from_i64_rows(&[vec![2]]);
        let sys = HomSystem::scalar(&m, &g, &[g.element(&[1]).unwrap()]).unwrap();
        let trace = run_full_pipeline(&sys, &PipelineOptions::default()).unwrap();
        assert!(trace.no_solution);
    }

    #[test]
    fn full_pipeline_on_degenerate_overdetermined_system() {
        // Every equation is trivial, yet there are more equations than
        // variables: the reduction keeps one zero block, repairs its rank,
        // and the audit still closes.
        let sys = scalar_sys(&[vec![0], vec![0]], 4);
        let trace = run_full_pipeline(&sys, &PipelineOptions::default()).unwrap();
        assert!(trace.all_stages_pass());
        assert!(trace.final_is_circular);

        let g = FiniteAbelianGroup::normalize(&[2, 2]).unwrap();
        let m = IntMatrix::from_i64_rows(&[vec![0], vec![0]]);
        let sys = HomSystem::scalar(&m, &g, &[g.zero(), g.zero()]).unwrap();
        let trace = run_full_pipeline(&sys, &PipelineOptions::default()).unwrap();
        assert!(trace.all_stages_pass());
    }

    #[test]
    fn full_pipeline_inhomogeneous_over_rank_two_group() {
        let g = FiniteAbelianGroup::normalize(&[4, 2]).unwrap();
        let m = IntMatrix::from_i64_rows(&[vec![1, 1, 1]]);
        let b = g.element(&[1, 1]).unwrap();
        let sys = HomSystem::scalar(&m, &g, &[b]).unwrap();
        let trace = run_full_pipeline(&sys, &PipelineOptions::default()).unwrap();
        assert!(!trace.no_solution);
        assert!(trace.all_stages_pass());
        assert!(trace.final_is_circular);
        let dehom = trace.stages.iter().find(|s| s.label == "dehomogenize").unwrap();
        assert!(dehom.cert.as_ref().unwrap().all_pass());
    }

    #[test]
    fn full_pipeline_on_block_built_system() {
        let g = FiniteAbelianGroup::normalize(&[2, 2]).unwrap();
        let shear = IntMatrix::from_i64_rows(&[vec![1, 0], vec![1, 1]]);
        let one = IntMatrix::identity(2);
        let sys = HomSystem::from_blocks(
            &[vec![shear, one.clone(), one]],
            &g,
            &[vec![0, 0]],
        )
        .unwrap();
        let trace = run_full_pipeline(&sys, &PipelineOptions::default()).unwrap();
        assert!(trace.all_stages_pass());
        assert!(trace.final_is_circular);
    }

    #[test]
    fn partition_matches_whole_solution_set() {
        let sys = scalar_sys(&[vec![2, 2, 2]], 4);
        let report = partition_by_independent_vectors(&sys, DEFAULT_ENUM_CAP).unwrap();
        assert!(report.disjoint);
        assert!(report.union_matches);
        let total: usize = report.piece_counts.iter().map(|(_, c)| c).sum();
        assert_eq!(total, 32);
    }
}
