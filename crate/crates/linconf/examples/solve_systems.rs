//! Building configuration systems, enumerating their solutions two ways,
//! projecting, and converting subgroups back into equations.
//!
//! Run with: cargo run --example solve_systems

use linconf::group::{FiniteAbelianGroup, DEFAULT_ENUM_CAP};
use linconf::matrix::IntMatrix;
use linconf::system::{
    project_solutions, subgroup_closure, subgroup_to_system, HomSystem, VarDomain,
};

fn main() {
    // x1 + 2 x2 + 2 x3 = 0 over Z6.
    let z6 = FiniteAbelianGroup::normalize(&[6]).unwrap();
    let a = IntMatrix::from_i64_rows(&[vec![1, 2, 2]]);
    let sys = HomSystem::scalar(&a, &z6, &[z6.zero()]).unwrap();

    let sols = sys.enumerate_solutions(None, DEFAULT_ENUM_CAP).unwrap();
    let brute = sys.enumerate_solutions_full_scan(None, DEFAULT_ENUM_CAP).unwrap();
    println!("solutions: {} (parameterized) = {} (full scan)", sols.count(), brute.count());
    assert_eq!(sols.tuples, brute.tuples);

    // The first projection is the even residues: a proper subgroup.
    let p1 = project_solutions(&sys, &sols, 0).unwrap();
    println!("projection onto x1: {:?}", p1);

    // Restricted domains.
    let domains: Vec<VarDomain> = vec![
        [vec![0u64], vec![2]].into_iter().collect(),
        [vec![1u64]].into_iter().collect(),
        (0..6u64).map(|v| vec![v]).collect(),
    ];
    let restricted = sys.enumerate_solutions(Some(&domains), DEFAULT_ENUM_CAP).unwrap();
    println!("solutions with x1 in {{0,2}}, x2 = 1: {}", restricted.count());

    // Subgroups become kernels: the diagonal of Z4 x Z4, shifted.
    let z4 = FiniteAbelianGroup::normalize(&[4]).unwrap();
    let coset_sys = subgroup_to_system(
        &[z4.clone(), z4.clone()],
        &[vec![1, 2]],
        &[0, 1],
        DEFAULT_ENUM_CAP,
    )
    .unwrap();
    let coset = coset_sys.enumerate_solutions(None, DEFAULT_ENUM_CAP).unwrap();
    let closure = subgroup_closure(&[4, 4], &[vec![1, 2]], DEFAULT_ENUM_CAP).unwrap();
    println!(
        "coset of <(1,2)> shifted by (0,1): {:?} ({} elements, subgroup has {})",
        coset.tuples,
        coset.count(),
        closure.len()
    );

    // Padding appends two zero-acting variables and scales the count.
    let padded = sys.pad_variables().unwrap();
    let padded_count = padded.enumerate_solutions(None, DEFAULT_ENUM_CAP).unwrap().count();
    println!(
        "padded system has {} variables and {} solutions (was {})",
        padded.num_vars(),
        padded_count,
        sols.count()
    );
}
