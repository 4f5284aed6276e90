//! The deletion rule in action: restrict the host to chosen domains, hit
//! every surviving copy with a greedy edge cover, mark the labels carrying
//! many deleted edges, and re-enumerate to confirm nothing survives.
//!
//! Run with: cargo run --example removal_deletion

use linconf::group::{FiniteAbelianGroup, DEFAULT_ENUM_CAP};
use linconf::hypergraph::{
    build_k_from_circular, enumerate_copies, greedy_edge_cover, removal_deletion,
};
use linconf::matrix::{build_band_annihilator, IntMatrix};
use linconf::system::{full_domain, HomSystem, VarDomain};

fn main() {
    let z5 = FiniteAbelianGroup::normalize(&[5]).unwrap();
    let a = IntMatrix::from_i64_rows(&[vec![1, 1, 1]]);
    let sys = HomSystem::scalar(&a, &z5, &[z5.zero()]).unwrap();
    let band = build_band_annihilator(&sys.matrix, 1, 5).unwrap();
    let (_, cert) = build_k_from_circular(&sys, &band, 5, DEFAULT_ENUM_CAP).unwrap();

    // Restrict the first coordinate to {0, 1}.
    let mut domains: Vec<VarDomain> = (0..3).map(|i| full_domain(&sys, i)).collect();
    domains[0] = [vec![0u64], vec![1]].into_iter().collect();

    let restricted = cert.k_graph.restrict_by_labels(&domains);
    let before = enumerate_copies(&cert.h_graph, &restricted, DEFAULT_ENUM_CAP).unwrap();
    println!("copies in the restricted host: {}", before.len());

    let cover = greedy_edge_cover(&cert.h_graph, &restricted, DEFAULT_ENUM_CAP).unwrap();
    println!("greedy cover uses {} edges:", cover.len());
    for (color, verts) in cover.iter().take(6) {
        println!("  color {} on {:?}", color, verts);
    }

    let outcome = removal_deletion(&cert, &domains, &cover, DEFAULT_ENUM_CAP).unwrap();
    println!(
        "marking thresholds per coordinate: {:?}",
        outcome
            .thresholds
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
    );
    for (i, removed) in outcome.xprime.iter().enumerate() {
        println!(
            "  coordinate {} loses {} labels: {:?}",
            i + 1,
            removed.len(),
            removed.iter().collect::<Vec<_>>()
        );
    }
    println!(
        "re-enumeration confirms no solution survives: {}",
        outcome.verified
    );
}
