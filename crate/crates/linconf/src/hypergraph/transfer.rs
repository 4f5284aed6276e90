//! Transporting a representation certificate along an equivalence map:
//! recoloring, relabeling, and rescaling the class data so the represented
//! system becomes the map's target. Every transfer is re-verified by the
//! property suite afterwards; nothing here is trusted.

use super::rep::{RepresentationCertificate, SystemRef, TransferLayer};
use super::ColoredHypergraph;
use crate::error::{Error, Result};
use crate::group::increment_mixed_radix;
use crate::pipeline::{verify_equivalence, EquivalenceMap, MapKind, VerifyOptions};
use crate::system::{project_solutions, HomSystem};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use std::collections::BTreeSet;

fn as_hom(system: &SystemRef) -> Result<&HomSystem> {
    match system {
        SystemRef::Hom(sys) => Ok(sys),
        _ => Err(Error::Precondition(
            "transfers operate on homomorphism systems".into(),
        )),
    }
}

fn check_cover(h: &ColoredHypergraph, sigma: &[usize]) -> Result<()> {
    let mut covered = vec![false; h.n_vertices];
    for &src in sigma {
        for e in h.edges_of_color(src + 1) {
            for &v in &e.verts {
                covered[v] = true;
            }
        }
    }
    if covered.iter().all(|&c| c) {
        Ok(())
    } else {
        Err(Error::Precondition(
            "retained colors do not cover the template vertices".into(),
        ))
    }
}

/// Recolors edge `sigma(i) -> i` in both hypergraphs, relabeling host edges
/// through the per-coordinate maps.
fn rebuild_pair(
    cert: &RepresentationCertificate,
    map: &EquivalenceMap,
    relabel: bool,
) -> Result<(ColoredHypergraph, ColoredHypergraph)> {
    let mut h = ColoredHypergraph::new(cert.h_graph.n_vertices, cert.h_graph.uniformity, cert.h_graph.directed);
    h.clusters = cert.h_graph.clusters.clone();
    let mut k = ColoredHypergraph::new(cert.k_graph.n_vertices, cert.k_graph.uniformity, cert.k_graph.directed);
    k.clusters = cert.k_graph.clusters.clone();
    for (i, &src) in map.sigma.iter().enumerate() {
        for e in cert.h_graph.edges_of_color(src + 1) {
            h.add_edge(i + 1, &e.verts, None)?;
        }
        for e in cert.k_graph.edges_of_color(src + 1) {
            let label = match &e.label {
                None => None,
                Some(l) => {
                    if relabel {
                        Some(map.affines[i].apply(l))
                    } else {
                        Some(l.clone())
                    }
                }
            };
            k.add_edge(i + 1, &e.verts, label)?;
        }
    }
    Ok((k, h))
}

fn domain_size(sys: &HomSystem) -> BigUint {
    sys.domain_size(0)
}

/// Certificate transport along a bijective relabeling of the solutions.
pub fn transfer_1_auto(
    cert: &RepresentationCertificate,
    map: &EquivalenceMap,
    target: &HomSystem,
    _cap: u64,
) -> Result<RepresentationCertificate> {
    let source = as_hom(&cert.system)?;
    map.validate(target, source)?;
    if !map.mu.is_one() {
        return Err(Error::Precondition("bijective transfer needs multiplicity one".into()));
    }
    check_cover(&cert.h_graph, &map.sigma)?;
    let (k, h) = rebuild_pair(cert, map, true)?;
    let gamma = map.sigma.iter().map(|&s| cert.gamma[s].clone()).collect();
    Ok(RepresentationCertificate {
        k_graph: k,
        h_graph: h,
        system: SystemRef::Hom(target.clone()),
        label_domain_size: domain_size(target),
        label_width: target.var_spans.first().map_or(0, |&(_, l)| l),
        gamma,
        p: cert.p.clone(),
        c: cert.c.clone(),
        chi1: cert.chi1,
        chi2: cert.chi2.clone(),
        q_values: cert.q_values.clone(),
        strong: cert.strong,
        transfer: Some(TransferLayer {
            kind: MapKind::OneAuto,
            map: map.clone(),
            prev: Box::new(cert.clone()),
        }),
    })
}

/// Certificate transport along a coordinate projection over the same group:
/// the class set grows by the fiber index, the multiplicity moves into `p`
/// through the dropped proportions.
pub fn transfer_mu_auto(
    cert: &RepresentationCertificate,
    map: &EquivalenceMap,
    target: &HomSystem,
    _cap: u64,
) -> Result<RepresentationCertificate> {
    let source = as_hom(&cert.system)?;
    map.validate(target, source)?;
    for affine in &map.affines {
        if !affine.matrix.eq(&crate::matrix::IntMatrix::identity(affine.matrix.rows()))
            || affine.shift.iter().any(|&s| s != 0)
        {
            return Err(Error::Precondition(
                "projection transfer requires identity coordinate maps".into(),
            ));
        }
    }
    check_cover(&cert.h_graph, &map.sigma)?;
    let (k, h) = rebuild_pair(cert, map, false)?;
    let kept: BTreeSet<usize> = map.sigma.iter().copied().collect();
    let mut p = cert.p.clone();
    for (j, g) in cert.gamma.iter().enumerate() {
        if !kept.contains(&j) {
            p *= g;
        }
    }
    let gamma: Vec<BigRational> = map.sigma.iter().map(|&s| cert.gamma[s].clone()).collect();
    let mu = map
        .mu
        .to_u64()
        .ok_or_else(|| Error::Precondition("multiplicity too large to index classes".into()))?;
    let mut q_values = Vec::with_capacity(cert.q_values.len() * mu as usize);
    for q in &cert.q_values {
        for j in 0..mu {
            let mut extended = q.clone();
            extended.push(j);
            q_values.push(extended);
        }
    }
    Ok(RepresentationCertificate {
        k_graph: k,
        h_graph: h,
        system: SystemRef::Hom(target.clone()),
        label_domain_size: domain_size(target),
        label_width: target.var_spans.first().map_or(0, |&(_, l)| l),
        gamma,
        p,
        c: cert.c.clone(),
        chi1: cert.chi1,
        chi2: cert.chi2.clone(),
        q_values,
        strong: cert.strong,
        transfer: Some(TransferLayer {
            kind: MapKind::MuAuto,
            map: map.clone(),
            prev: Box::new(cert.clone()),
        }),
    })
}

/// Certificate transport along a group quotient with full product fibers:
/// one shared surjection relabels every coordinate and the classes grow by
/// the diagonal quotient of the fiber indices.
pub fn transfer_mu_equiv_1(
    cert: &RepresentationCertificate,
    map: &EquivalenceMap,
    target: &HomSystem,
    _cap: u64,
) -> Result<RepresentationCertificate> {
    let source = as_hom(&cert.system)?;
    map.validate(target, source)?;
    let m1 = target.num_vars();
    if source.num_vars() != m1 {
        return Err(Error::Precondition(
            "quotient transfer keeps the variable count".into(),
        ));
    }
    if map.sigma.iter().enumerate().any(|(i, &s)| i != s) {
        return Err(Error::Precondition("quotient transfer uses the identity ordering".into()));
    }
    let first = &map.affines[0];
    if map.affines.iter().any(|a| a != first) {
        return Err(Error::Precondition(
            "quotient transfer applies one shared surjection".into(),
        ));
    }
    // Surjectivity and the fiber equipartition of the shared map.
    let w = source.var_spans.first().map_or(0, |&(_, l)| l);
    let source_orders = source.col_orders[..w].to_vec();
    let mut image_counts: std::collections::BTreeMap<Vec<u64>, u64> = Default::default();
    let mut v = vec![0u64; w];
    loop {
        *image_counts.entry(first.apply(&v)).or_insert(0) += 1;
        if !increment_mixed_radix(&mut v, &source_orders) {
            break;
        }
    }
    let target_domain = domain_size(target)
        .to_u64()
        .ok_or_else(|| Error::Precondition("target domain too large".into()))?;
    if image_counts.len() as u64 != target_domain {
        return Err(Error::Precondition("shared map is not surjective".into()));
    }
    let beta = *image_counts.values().next().unwrap();
    if image_counts.values().any(|&c| c != beta) {
        return Err(Error::Precondition("fibers are not an equipartition".into()));
    }
    let (k, h) = rebuild_pair(cert, map, true)?;
    let class_count = beta.pow((m1 - 1) as u32);
    let mut q_values = Vec::with_capacity(cert.q_values.len() * class_count as usize);
    for q in &cert.q_values {
        for j in 0..class_count {
            let mut extended = q.clone();
            extended.push(j);
            q_values.push(extended);
        }
    }
    Ok(RepresentationCertificate {
        k_graph: k,
        h_graph: h,
        system: SystemRef::Hom(target.clone()),
        label_domain_size: domain_size(target),
        label_width: target.var_spans.first().map_or(0, |&(_, l)| l),
        gamma: cert.gamma.clone(),
        p: cert.p.clone(),
        c: cert.c.clone(),
        chi1: cert.chi1,
        chi2: cert.chi2.clone(),
        q_values,
        strong: cert.strong,
        transfer: Some(TransferLayer {
            kind: MapKind::MuEquiv1,
            map: map.clone(),
            prev: Box::new(cert.clone()),
        }),
    })
}

/// Certificate transport along a general surjection with per-coordinate
/// fiber constancy: proportions pick up the projection ratios and `p` is
/// rescaled accordingly. Requires a strong input certificate; both
/// hypotheses are certified by enumeration before anything is built.
pub fn transfer_mu_equiv_2(
    cert: &RepresentationCertificate,
    map: &EquivalenceMap,
    target: &HomSystem,
    cap: u64,
) -> Result<RepresentationCertificate> {
    let source = as_hom(&cert.system)?;
    map.validate(target, source)?;
    if !cert.strong {
        return Err(Error::Precondition(
            "general transfer needs a strong input certificate".into(),
        ));
    }
    check_cover(&cert.h_graph, &map.sigma)?;
    let report = verify_equivalence(
        map,
        target,
        source,
        &VerifyOptions {
            cap,
            check_coordinate_constancy: true,
            target_domains: None,
        },
    )?;
    if !report.all_pass() {
        let coord = report
            .coordinate_constancy
            .as_ref()
            .and_then(|v| v.iter().position(|&ok| !ok));
        return Err(Error::Precondition(match coord {
            Some(i) => format!("fiber constancy fails at coordinate {}", i),
            None => format!("map certification failed: {:?}", report.violations),
        }));
    }

    let m1 = target.num_vars();
    let sols1 = target.enumerate_solutions(None, cap)?;
    let sols2 = source.enumerate_solutions(None, cap)?;
    let g1 = BigRational::from(BigInt::from(domain_size(target)));
    let g2 = BigRational::from(BigInt::from(domain_size(source)));
    let mut gamma = Vec::with_capacity(m1);
    let mut proj_ratio_product = BigRational::one();
    for (i, &s) in map.sigma.iter().enumerate() {
        let s1 = project_solutions(target, &sols1, i)?.len() as u64;
        let s2 = project_solutions(source, &sols2, s)?.len() as u64;
        let ratio = BigRational::new(BigInt::from(s2), BigInt::from(s1));
        gamma.push(&cert.gamma[s] * &ratio * &g1 / &g2);
        proj_ratio_product *= BigRational::new(BigInt::from(s1), BigInt::from(s2));
    }
    let kept: BTreeSet<usize> = map.sigma.iter().copied().collect();
    let mut dropped_gamma = BigRational::one();
    for (j, g) in cert.gamma.iter().enumerate() {
        if !kept.contains(&j) {
            dropped_gamma *= g;
        }
    }
    let mu_ratio = BigRational::from(BigInt::from(map.mu.clone()));
    let group_ratio = (&g2 / &g1).pow((m1 as i32) - 1);
    let p = mu_ratio * &cert.p * group_ratio * dropped_gamma * proj_ratio_product;
    if !p.is_positive() {
        return Err(Error::Precondition("rescaled multiplicity is not positive".into()));
    }

    let (k, h) = rebuild_pair(cert, map, true)?;
    Ok(RepresentationCertificate {
        k_graph: k,
        h_graph: h,
        system: SystemRef::Hom(target.clone()),
        label_domain_size: domain_size(target),
        label_width: target.var_spans.first().map_or(0, |&(_, l)| l),
        gamma,
        p,
        c: cert.c.clone(),
        chi1: cert.chi1,
        chi2: cert.chi2.clone(),
        q_values: cert.q_values.clone(),
        strong: true,
        transfer: Some(TransferLayer {
            kind: MapKind::MuEquiv2,
            map: map.clone(),
            prev: Box::new(cert.clone()),
        }),
    })
}
