//! Transporting a verified certificate along equivalence maps: a shift onto
//! an inhomogeneous system, a multiplicity-three projection, and a general
//! surjection that scales the per-coordinate proportions. Each transfer
//! is re-verified from scratch.
//!
//! Run with: cargo run --example representation_transfer

use linconf::group::{FiniteAbelianGroup, DEFAULT_ENUM_CAP};
use linconf::hypergraph::{
    build_k_from_circular, transfer_1_auto, transfer_mu_auto, transfer_mu_equiv_2,
    verify_rp_properties, RpMode,
};
use linconf::matrix::{build_band_annihilator, IntMatrix};
use linconf::pipeline::{AffineMap, EquivalenceMap, MapKind};
use linconf::system::HomSystem;
use num_bigint::BigUint;
use num_traits::One;

fn main() {
    // Base certificate: the cyclic sum over Z5.
    let z5 = FiniteAbelianGroup::normalize(&[5]).unwrap();
    let a = IntMatrix::from_i64_rows(&[vec![1, 1, 1]]);
    let sys = HomSystem::scalar(&a, &z5, &[z5.zero()]).unwrap();
    let band = build_band_annihilator(&sys.matrix, 1, 5).unwrap();
    let (_, cert) = build_k_from_circular(&sys, &band, 5, DEFAULT_ENUM_CAP).unwrap();

    // Shift transfer: represent x1 + x2 + x3 = 2 by relabeling the edges.
    let shifted = HomSystem::scalar(&a, &z5, &[z5.element(&[2]).unwrap()]).unwrap();
    let shift_map = EquivalenceMap {
        sigma: vec![0, 1, 2],
        affines: [0u64, 0, 2]
            .iter()
            .map(|&s| AffineMap {
                matrix: IntMatrix::identity(1),
                shift: vec![s],
                target_orders: vec![5],
            })
            .collect(),
        mu: BigUint::one(),
        kind: MapKind::OneAuto,
    };
    let moved = transfer_1_auto(&cert, &shift_map, &shifted, DEFAULT_ENUM_CAP).unwrap();
    let rp = verify_rp_properties(&moved, RpMode::Exact, true, DEFAULT_ENUM_CAP).unwrap();
    println!("shift transfer re-verifies: {}", rp.all_pass());

    // Projection transfer: a five-variable circular system over Z3 projects
    // 3-to-1 onto x1 - x2 - x4 = 0; the class set grows by the fiber index.
    let z3 = FiniteAbelianGroup::normalize(&[3]).unwrap();
    let wide = IntMatrix::from_i64_rows(&[vec![1, 0, 1, 1, 1], vec![0, 1, 1, 2, 1]]);
    let src = HomSystem::scalar(&wide, &z3, &[z3.zero(), z3.zero()]).unwrap();
    let band = build_band_annihilator(&src.matrix, 1, 3).unwrap();
    let (_, cert5) = build_k_from_circular(&src, &band, 3, DEFAULT_ENUM_CAP).unwrap();
    let target = HomSystem::scalar(
        &IntMatrix::from_i64_rows(&[vec![1, -1, -1]]),
        &z3,
        &[z3.zero()],
    )
    .unwrap();
    let proj = EquivalenceMap {
        sigma: vec![0, 1, 3],
        affines: (0..3).map(|_| AffineMap::identity(&[3])).collect(),
        mu: BigUint::from(3u32),
        kind: MapKind::MuAuto,
    };
    let moved = transfer_mu_auto(&cert5, &proj, &target, DEFAULT_ENUM_CAP).unwrap();
    let rp = verify_rp_properties(&moved, RpMode::Exact, true, DEFAULT_ENUM_CAP).unwrap();
    println!(
        "projection transfer re-verifies: {} ({} classes)",
        rp.all_pass(),
        moved.q_values.len()
    );

    // General transfer: doubling Z4 onto its even subgroup scales every
    // proportion to two while keeping the strong property.
    let z4 = FiniteAbelianGroup::normalize(&[4]).unwrap();
    let sum4 = HomSystem::scalar(&a, &z4, &[z4.zero()]).unwrap();
    let band4 = build_band_annihilator(&sum4.matrix, 1, 4).unwrap();
    let (_, cert4) = build_k_from_circular(&sum4, &band4, 4, DEFAULT_ENUM_CAP).unwrap();
    let even = HomSystem::scalar(
        &IntMatrix::from_i64_rows(&[
            vec![2, 0, 0],
            vec![0, 2, 0],
            vec![0, 0, 2],
            vec![1, 1, 1],
        ]),
        &z4,
        &vec![z4.zero(); 4],
    )
    .unwrap();
    let doubling = EquivalenceMap {
        sigma: vec![0, 1, 2],
        affines: (0..3)
            .map(|_| AffineMap {
                matrix: IntMatrix::from_i64_rows(&[vec![2]]),
                shift: vec![0],
                target_orders: vec![4],
            })
            .collect(),
        mu: BigUint::from(4u32),
        kind: MapKind::MuEquiv2,
    };
    let moved = transfer_mu_equiv_2(&cert4, &doubling, &even, DEFAULT_ENUM_CAP).unwrap();
    let rp = verify_rp_properties(&moved, RpMode::Exact, true, DEFAULT_ENUM_CAP).unwrap();
    println!(
        "general transfer re-verifies: {} (proportions {:?})",
        rp.all_pass(),
        moved
            .gamma
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
    );
}
