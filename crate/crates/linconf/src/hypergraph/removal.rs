//! The deletion rule: given an edge set destroying every copy in the
//! restricted host, mark the labels carrying many deleted edges and verify
//! by re-enumeration that no solution survives in the shrunken domains.

use super::rep::RepresentationCertificate;
use super::{enumerate_copies, ColoredHypergraph};
use crate::error::{Error, Result};
use crate::system::VarDomain;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::BTreeSet;

pub type EdgeRef = (usize, Vec<usize>);

/// Greedy hitting set over the enumerated copies: repeatedly removes the
/// edge contained in the most surviving copies. No optimality claim; this
/// stands in for the non-constructive cover of the removal argument.
pub fn greedy_edge_cover(
    h: &ColoredHypergraph,
    k_x: &ColoredHypergraph,
    cap: u64,
) -> Result<Vec<EdgeRef>> {
    let copies = enumerate_copies(h, k_x, cap)?;
    let mut copy_edges: Vec<BTreeSet<EdgeRef>> = copies
        .iter()
        .map(|copy| {
            h.edges
                .iter()
                .map(|e| {
                    let mapped: Vec<usize> = e.verts.iter().map(|&v| copy[v]).collect();
                    (e.color, k_x.canonical_verts(&mapped))
                })
                .collect()
        })
        .collect();
    let mut cover = Vec::new();
    while !copy_edges.is_empty() {
        let mut counts: std::collections::BTreeMap<&EdgeRef, usize> = Default::default();
        for edges in &copy_edges {
            for e in edges {
                *counts.entry(e).or_insert(0) += 1;
            }
        }
        let (&best, _) = counts
            .iter()
            .max_by(|(a, ca), (b, cb)| ca.cmp(cb).then_with(|| b.cmp(a)))
            .unwrap();
        let best = best.clone();
        copy_edges.retain(|edges| !edges.contains(&best));
        cover.push(best);
    }
    Ok(cover)
}

#[derive(Debug, Clone)]
pub struct DeletionOutcome {
    /// Labels removed from each coordinate domain.
    pub xprime: Vec<VarDomain>,
    /// Marking threshold per coordinate.
    pub thresholds: Vec<BigRational>,
    /// No solution survives in the shrunken domains, by re-enumeration.
    pub verified: bool,
    pub cover_size: usize,
}

/// Applies the pigeonhole deletion rule: coordinate `i` loses every label
/// carrying at least `lambda * gamma_i / m` deleted edges of color `i`.
pub fn removal_deletion(
    cert: &RepresentationCertificate,
    domains: &[VarDomain],
    eprime: &[EdgeRef],
    cap: u64,
) -> Result<DeletionOutcome> {
    let m = cert.system.num_vars();
    if domains.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "need {} domains, got {}",
            m,
            domains.len()
        )));
    }
    let k_x = cert.k_graph.restrict_by_labels(domains);
    let eprime_set: BTreeSet<EdgeRef> = eprime.iter().cloned().collect();

    // The cover must destroy every copy in the restricted host.
    let copies = enumerate_copies(&cert.h_graph, &k_x, cap)?;
    for copy in &copies {
        let survives = cert.h_graph.edges.iter().all(|e| {
            let mapped: Vec<usize> = e.verts.iter().map(|&v| copy[v]).collect();
            !eprime_set.contains(&(e.color, k_x.canonical_verts(&mapped)))
        });
        if survives {
            return Err(Error::Precondition(
                "edge set does not destroy every copy in the restricted host".into(),
            ));
        }
    }

    let lambda = cert.lambda();
    let m_rat = BigRational::from(BigInt::from(m as u64));
    let k_index = cert.k_graph.edge_index();
    let mut xprime: Vec<VarDomain> = vec![BTreeSet::new(); m];
    let mut thresholds = Vec::with_capacity(m);
    for i in 0..m {
        thresholds.push(&lambda * &cert.gamma[i] / &m_rat);
    }
    // Count deleted edges per (color, label).
    let mut label_counts: std::collections::BTreeMap<(usize, Vec<u64>), u64> = Default::default();
    for (color, verts) in &eprime_set {
        let idx = k_index.get(&(*color, verts.clone())).ok_or_else(|| {
            Error::Precondition("deleted edge does not exist in the host".into())
        })?;
        let label = cert.k_graph.edges[*idx]
            .label
            .clone()
            .ok_or_else(|| Error::Precondition("deleted edge lacks a label".into()))?;
        *label_counts.entry((*color, label)).or_insert(0) += 1;
    }
    for ((color, label), count) in &label_counts {
        let i = color - 1;
        if BigRational::from(BigInt::from(*count)) >= thresholds[i] {
            xprime[i].insert(label.clone());
        }
    }

    // Re-enumerate the system over the shrunken domains.
    let shrunk: Vec<VarDomain> = domains
        .iter()
        .zip(&xprime)
        .map(|(d, removed)| d.difference(removed).cloned().collect())
        .collect();
    let survivors = cert.system.solutions_restricted(&shrunk, cap)?;
    Ok(DeletionOutcome {
        xprime,
        thresholds,
        verified: survivors.is_empty(),
        cover_size: eprime_set.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteAbelianGroup, DEFAULT_ENUM_CAP};
    use crate::hypergraph::rep::build_k_from_circular;
    use crate::matrix::{build_band_annihilator, IntMatrix};
    use crate::system::{full_domain, HomSystem};
    use num_bigint::BigInt;
    use num_traits::One;

    fn triangle_cert() -> (HomSystem, RepresentationCertificate) {
        let g = FiniteAbelianGroup::normalize(&[5]).unwrap();
        let matrix = IntMatrix::from_fn(1, 3, |_, _| BigInt::one());
        let sys = HomSystem::scalar(&matrix, &g, &[g.zero()]).unwrap();
        let band = build_band_annihilator(&sys.matrix, 1, 5).unwrap();
        let (_, cert) = build_k_from_circular(&sys, &band, 5, DEFAULT_ENUM_CAP).unwrap();
        (sys, cert)
    }

    #[test]
    fn deleting_every_first_color_edge_clears_the_projection() {
        let (sys, cert) = triangle_cert();
        let domains: Vec<VarDomain> = (0..3).map(|i| full_domain(&sys, i)).collect();
        let eprime: Vec<EdgeRef> = cert
            .k_graph
            .edges_of_color(1)
            .map(|e| (1, e.verts.clone()))
            .collect();
        let outcome = removal_deletion(&cert, &domains, &eprime, DEFAULT_ENUM_CAP).unwrap();
        assert!(outcome.verified);
        // Every first-coordinate value is marked: the projection is full.
        assert_eq!(outcome.xprime[0].len(), 5);
        assert!(outcome.xprime[1].is_empty());
    }

    #[test]
    fn empty_restriction_needs_no_deletions() {
        let (sys, cert) = triangle_cert();
        // x1 = 0, x2 = 1 forces x3 = 4; picking domains with no solution.
        let mut domains: Vec<VarDomain> = (0..3).map(|i| full_domain(&sys, i)).collect();
        domains[0] = VarDomain::from([vec![0u64]]);
        domains[1] = VarDomain::from([vec![1u64]]);
        domains[2] = VarDomain::from([vec![1u64]]);
        let outcome = removal_deletion(&cert, &domains, &[], DEFAULT_ENUM_CAP).unwrap();
        assert!(outcome.verified);
        assert!(outcome.xprime.iter().all(|x| x.is_empty()));
    }

    #[test]
    fn greedy_cover_destroys_all_copies_and_deletion_verifies() {
        let (sys, cert) = triangle_cert();
        let mut domains: Vec<VarDomain> = (0..3).map(|i| full_domain(&sys, i)).collect();
        domains[0] = VarDomain::from([vec![0u64], vec![1u64]]);
        let k_x = cert.k_graph.restrict_by_labels(&domains);
        let cover = greedy_edge_cover(&cert.h_graph, &k_x, DEFAULT_ENUM_CAP).unwrap();
        assert!(!cover.is_empty());
        let outcome = removal_deletion(&cert, &domains, &cover, DEFAULT_ENUM_CAP).unwrap();
        assert!(outcome.verified, "{:?}", outcome);
    }

    #[test]
    fn cover_must_destroy_every_copy() {
        let (sys, cert) = triangle_cert();
        let domains: Vec<VarDomain> = (0..3).map(|i| full_domain(&sys, i)).collect();
        let one_edge: Vec<EdgeRef> = cert
            .k_graph
            .edges_of_color(1)
            .take(1)
            .map(|e| (1, e.verts.clone()))
            .collect();
        assert!(removal_deletion(&cert, &domains, &one_edge, DEFAULT_ENUM_CAP).is_err());
    }
}
