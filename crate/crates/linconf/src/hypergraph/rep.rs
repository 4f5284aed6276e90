//! Representation certificates: the labeled hypergraph pair encoding a
//! configuration system, the construction from a circular identity-headed
//! system with its band annihilator, and the exhaustive verifier for the
//! four equidistribution properties.

use super::{enumerate_copies, ColoredHypergraph};
use crate::error::{Error, Result};
use crate::group::increment_mixed_radix;
use crate::matrix::{is_block_n_circular, IntMatrix};
use crate::pipeline::{EquivalenceMap, MapKind};
use crate::system::{HomSystem, VarDomain};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// The configuration system a certificate represents: either a homomorphism
/// system or an explicit solution list (subhypergraph-copy systems).
#[derive(Debug, Clone)]
pub enum SystemRef {
    Hom(HomSystem),
    Explicit {
        width: usize,
        num_vars: usize,
        solutions: Vec<Vec<u64>>,
    },
}

impl SystemRef {
    pub fn num_vars(&self) -> usize {
        match self {
            SystemRef::Hom(sys) => sys.num_vars(),
            SystemRef::Explicit { num_vars, .. } => *num_vars,
        }
    }

    pub fn var_width(&self) -> usize {
        match self {
            SystemRef::Hom(sys) => sys.var_spans.first().map_or(0, |&(_, l)| l),
            SystemRef::Explicit { width, .. } => *width,
        }
    }

    pub fn solutions(&self, cap: u64) -> Result<Vec<Vec<u64>>> {
        match self {
            SystemRef::Hom(sys) => Ok(sys.enumerate_solutions(None, cap)?.tuples),
            SystemRef::Explicit { solutions, .. } => Ok(solutions.clone()),
        }
    }

    pub fn solutions_restricted(&self, domains: &[VarDomain], cap: u64) -> Result<Vec<Vec<u64>>> {
        match self {
            SystemRef::Hom(sys) => Ok(sys.enumerate_solutions(Some(domains), cap)?.tuples),
            SystemRef::Explicit {
                width,
                num_vars,
                solutions,
            } => Ok(solutions
                .iter()
                .filter(|s| {
                    (0..*num_vars).all(|i| domains[i].contains(&s[i * width..(i + 1) * width]))
                })
                .cloned()
                .collect()),
        }
    }
}

/// Full representability data: the hypergraph pair, proportions, class set,
/// and the deterministic assignment rule realized through the transfer
/// history.
#[derive(Debug, Clone)]
pub struct RepresentationCertificate {
    pub k_graph: ColoredHypergraph,
    pub h_graph: ColoredHypergraph,
    pub system: SystemRef,
    /// Size of the label domain (the set the edge labels live in).
    pub label_domain_size: BigUint,
    pub label_width: usize,
    pub gamma: Vec<BigRational>,
    pub p: BigRational,
    pub c: BigRational,
    pub chi1: u64,
    pub chi2: BigRational,
    /// Explicit class indices; each class index is a path of fiber choices.
    pub q_values: Vec<Vec<u64>>,
    pub strong: bool,
    pub transfer: Option<TransferLayer>,
}

#[derive(Debug, Clone)]
pub struct TransferLayer {
    pub kind: MapKind,
    pub map: EquivalenceMap,
    pub prev: Box<RepresentationCertificate>,
}

impl RepresentationCertificate {
    /// Derived density: never stored, always recomputed.
    pub fn lambda(&self) -> BigRational {
        let k_pow = BigRational::from(BigInt::from(self.k_graph.n_vertices as u64))
            .pow(self.k_graph.uniformity as i32);
        &self.c * k_pow / BigRational::from(BigInt::from(self.label_domain_size.clone()))
    }

    /// Ordered labels of a copy, concatenated color by color.
    fn labels_of(
        &self,
        copy: &[usize],
        k_index: &std::collections::HashMap<(usize, Vec<usize>), usize>,
    ) -> Result<Vec<u64>> {
        let m = self.system.num_vars();
        let mut out = Vec::with_capacity(m * self.label_width);
        for color in 1..=m {
            let h_edge = self
                .h_graph
                .edges_of_color(color)
                .next()
                .ok_or_else(|| Error::Precondition(format!("template lacks color {}", color)))?;
            let mapped: Vec<usize> = h_edge.verts.iter().map(|&v| copy[v]).collect();
            let canonical = self.k_graph.canonical_verts(&mapped);
            let idx = k_index
                .get(&(color, canonical))
                .ok_or_else(|| Error::Precondition("copy uses a missing edge".into()))?;
            let label = self.k_graph.edges[*idx]
                .label
                .as_ref()
                .ok_or_else(|| Error::Precondition("edge without label".into()))?;
            out.extend_from_slice(label);
        }
        Ok(out)
    }

    /// Assigns `(solution, class index)` to every copy, walking the transfer
    /// history for the class components.
    pub fn assign_all(&self, copies: &[Vec<usize>], cap: u64) -> Result<Vec<(Vec<u64>, Vec<u64>)>> {
        let k_index = self.k_graph.edge_index();
        let own: Vec<Vec<u64>> = copies
            .iter()
            .map(|c| self.labels_of(c, &k_index))
            .collect::<Result<_>>()?;
        let layer = match &self.transfer {
            None => {
                return Ok(own.into_iter().map(|sol| (sol, Vec::new())).collect());
            }
            Some(layer) => layer,
        };
        let prev_assign = layer.prev.assign_all(copies, cap)?;
        let mut out = Vec::with_capacity(copies.len());
        match layer.kind {
            MapKind::OneAuto | MapKind::MuEquiv2 => {
                for (sol, (_, q)) in own.into_iter().zip(prev_assign) {
                    out.push((sol, q));
                }
            }
            MapKind::MuAuto => {
                // Fiber index: position of the previous solution within its
                // sorted fiber over the projected solution.
                let prev_sys = match &layer.prev.system {
                    SystemRef::Hom(sys) => sys,
                    _ => {
                        return Err(Error::Precondition(
                            "fiber indexing needs a homomorphism system".into(),
                        ))
                    }
                };
                let own_sys = match &self.system {
                    SystemRef::Hom(sys) => sys,
                    _ => {
                        return Err(Error::Precondition(
                            "fiber indexing needs a homomorphism system".into(),
                        ))
                    }
                };
                let mut grouped: BTreeMap<Vec<u64>, Vec<Vec<u64>>> = BTreeMap::new();
                for s in prev_sys.enumerate_solutions(None, cap)?.tuples {
                    let image = layer.map.apply(own_sys, prev_sys, &s);
                    grouped.entry(image).or_default().push(s);
                }
                for ((sol, (prev_sol, prev_q)), _copy) in
                    own.into_iter().zip(prev_assign).zip(copies)
                {
                    let fiber = grouped.get(&sol).ok_or_else(|| {
                        Error::Precondition("copy solution missing from projected fibers".into())
                    })?;
                    let iota = fiber
                        .iter()
                        .position(|y| y == &prev_sol)
                        .ok_or_else(|| {
                            Error::Precondition("previous solution missing from fiber".into())
                        })? as u64;
                    let mut q = prev_q;
                    q.push(iota);
                    out.push((sol, q));
                }
            }
            MapKind::MuEquiv1 => {
                // Per-coordinate fiber indices, collapsed modulo the
                // diagonal: the class is the mixed-radix rank of the
                // differences.
                let prev = &layer.prev;
                let w = prev.system.var_width();
                let m1 = self.system.num_vars();
                let prev_orders: Vec<u64> = match &prev.system {
                    SystemRef::Hom(sys) => sys.col_orders[..w].to_vec(),
                    _ => {
                        return Err(Error::Precondition(
                            "value fiber indexing needs a homomorphism system".into(),
                        ))
                    }
                };
                let affine = &self.transfer.as_ref().unwrap().map.affines[0];
                let mut by_image: BTreeMap<Vec<u64>, Vec<Vec<u64>>> = BTreeMap::new();
                let mut v = vec![0u64; w];
                loop {
                    by_image.entry(affine.apply(&v)).or_default().push(v.clone());
                    if !increment_mixed_radix(&mut v, &prev_orders) {
                        break;
                    }
                }
                let beta = by_image.values().map(|f| f.len()).max().unwrap_or(1) as u64;
                if by_image.values().any(|f| f.len() as u64 != beta) {
                    return Err(Error::Precondition(
                        "value fibers are not an equipartition".into(),
                    ));
                }
                for ((sol, (prev_sol, prev_q)), _copy) in
                    own.into_iter().zip(prev_assign).zip(copies)
                {
                    let mut iotas = Vec::with_capacity(m1);
                    for i in 0..m1 {
                        let value = &prev_sol[i * w..(i + 1) * w];
                        let image = affine.apply(value);
                        let fiber = &by_image[&image];
                        let iota = fiber.iter().position(|y| y[..] == *value).unwrap() as u64;
                        iotas.push(iota);
                    }
                    let mut class = 0u64;
                    for i in 1..m1 {
                        class = class * beta + (iotas[i] + beta - iotas[0]) % beta;
                    }
                    let mut q = prev_q;
                    q.push(class);
                    out.push((sol, q));
                }
            }
            _ => {
                return Err(Error::Precondition(
                    "unsupported transfer kind in assignment".into(),
                ))
            }
        }
        Ok(out)
    }
}

/// Cyclic template: `m` vertices, edge `i` covering `{i, ..., i+k}` modulo
/// `m`, one color per edge. Needs `m >= k + 2` for the edges to be distinct.
pub fn build_cycle_template_h(m: usize, k: usize) -> Result<ColoredHypergraph> {
    if m < k + 2 {
        return Err(Error::Precondition(format!(
            "{} vertices cannot host {} distinct cyclic windows",
            m,
            k + 1
        )));
    }
    let mut h = ColoredHypergraph::new(m, k + 1, false);
    h.clusters = Some((0..m).collect());
    for i in 0..m {
        let verts: Vec<usize> = (0..=k).map(|j| (i + j) % m).collect();
        h.add_edge(i + 1, &verts, None)?;
    }
    Ok(h)
}

/// Builds the labeled host hypergraph of an identity-headed circular system
/// with its band annihilator: one cluster per variable, every transversal
/// window an edge, labels given by the annihilator blocks. Every copy of
/// the cycle template then spells out a solution.
pub fn build_k_from_circular(
    sys: &HomSystem,
    band: &IntMatrix,
    n_check: u64,
    cap: u64,
) -> Result<(ColoredHypergraph, RepresentationCertificate)> {
    let head = sys
        .identity_head()
        .ok_or_else(|| Error::Precondition("host construction expects an identity head".into()))?;
    let w = sys.var_spans.first().map(|&(_, l)| l).unwrap_or(0);
    if w == 0 || sys.var_spans.iter().any(|&(_, l)| l != w) {
        return Err(Error::Precondition("variables must share one shape".into()));
    }
    let first_orders = sys.col_orders[..w].to_vec();
    for &(s, l) in &sys.var_spans {
        if sys.col_orders[s..s + l] != first_orders[..] {
            return Err(Error::Precondition("variables must share one shape".into()));
        }
    }
    if !sys.rhs_is_zero() {
        return Err(Error::Precondition("host construction needs a homogeneous system".into()));
    }
    let m = sys.num_vars();
    let k_blocks = head / w;
    if !is_block_n_circular(&sys.matrix, w, n_check)? {
        return Err(Error::Precondition("system matrix is not block circular".into()));
    }
    if band.rows() != m * w || band.cols() != m * w {
        return Err(Error::DimensionMismatch("annihilator shape".into()));
    }
    if !sys.matrix.mul(band).is_zero() {
        return Err(Error::Precondition("annihilator does not cancel the matrix".into()));
    }

    let domain: u64 = first_orders.iter().product();
    let n_vertices = (m as u64)
        .checked_mul(domain)
        .filter(|&v| v <= cap)
        .ok_or(Error::CapExceeded {
            needed: format!("{} * {}", m, domain),
            cap,
        })? as usize;
    let mut edge_budget = BigUint::from(m as u64);
    for _ in 0..=k_blocks {
        edge_budget *= BigUint::from(domain);
    }
    if edge_budget > BigUint::from(cap) {
        return Err(Error::CapExceeded {
            needed: edge_budget.to_string(),
            cap,
        });
    }

    // Value table shared by every cluster.
    let mut values: Vec<Vec<u64>> = Vec::with_capacity(domain as usize);
    let mut cur = vec![0u64; w];
    loop {
        values.push(cur.clone());
        if !increment_mixed_radix(&mut cur, &first_orders) {
            break;
        }
    }

    let mut k_graph = ColoredHypergraph::new(n_vertices, k_blocks + 1, false);
    k_graph.clusters = Some((0..n_vertices).map(|v| v / domain as usize).collect());

    // Reduced annihilator blocks for fast label evaluation.
    let reduced_block = |bi: usize, bj: usize| -> Vec<Vec<u64>> {
        (0..w)
            .map(|r| {
                (0..w)
                    .map(|c| {
                        band.get(bi * w + r, bj * w + c)
                            .mod_floor(&BigInt::from(first_orders[r]))
                            .to_u64()
                            .unwrap()
                    })
                    .collect()
            })
            .collect()
    };

    for color in 1..=m {
        let i = color - 1;
        let blocks: Vec<Vec<Vec<u64>>> =
            (0..=k_blocks).map(|j| reduced_block(i, (i + j) % m)).collect();
        let mut choice = vec![0u64; k_blocks + 1];
        let radices = vec![domain; k_blocks + 1];
        loop {
            let verts: Vec<usize> = (0..=k_blocks)
                .map(|j| ((i + j) % m) * domain as usize + choice[j] as usize)
                .collect();
            let mut label = vec![0u64; w];
            for (j, block) in blocks.iter().enumerate() {
                let g = &values[choice[j] as usize];
                for r in 0..w {
                    let modulus = first_orders[r] as u128;
                    let mut acc = label[r] as u128;
                    for c in 0..w {
                        acc = (acc + block[r][c] as u128 * g[c] as u128) % modulus;
                    }
                    label[r] = acc as u64;
                }
            }
            k_graph.add_edge(color, &verts, Some(label))?;
            if !increment_mixed_radix(&mut choice, &radices) {
                break;
            }
        }
    }

    let h_graph = build_cycle_template_h(m, k_blocks)?;
    let mut c_ratio = BigRational::one();
    for _ in 0..=k_blocks {
        c_ratio /= BigRational::from(BigInt::from(m as u64));
    }
    let cert = RepresentationCertificate {
        k_graph: k_graph.clone(),
        h_graph,
        system: SystemRef::Hom(sys.clone()),
        label_domain_size: BigUint::from(domain),
        label_width: w,
        gamma: vec![BigRational::one(); m],
        p: BigRational::one(),
        c: c_ratio.clone(),
        chi1: m as u64,
        chi2: c_ratio,
        q_values: vec![Vec::new()],
        strong: true,
        transfer: None,
    };
    Ok((k_graph, cert))
}

/// The subhypergraph-copy system represented by itself: labels are edge
/// identities and every copy is its own witness.
pub fn identity_representation(
    h0: &ColoredHypergraph,
    k0: &ColoredHypergraph,
    cap: u64,
) -> Result<RepresentationCertificate> {
    let m = h0.num_colors();
    for color in 1..=m {
        if h0.edges_of_color(color).count() != 1 {
            return Err(Error::Precondition(format!(
                "template must carry exactly one edge of color {}",
                color
            )));
        }
    }
    let mut k_labeled = k0.clone();
    for (idx, e) in k_labeled.edges.iter_mut().enumerate() {
        e.label = Some(vec![idx as u64]);
    }
    let copies = enumerate_copies(h0, &k_labeled, cap)?;
    let index = k_labeled.edge_index();
    let mut solution_counts: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for copy in &copies {
        let mut tuple = Vec::with_capacity(m);
        for color in 1..=m {
            let h_edge = h0.edges_of_color(color).next().unwrap();
            let mapped: Vec<usize> = h_edge.verts.iter().map(|&v| copy[v]).collect();
            let canonical = k_labeled.canonical_verts(&mapped);
            tuple.push(index[&(color, canonical)] as u64);
        }
        *solution_counts.entry(tuple).or_insert(0) += 1;
    }
    let p = solution_counts.values().max().copied().unwrap_or(1);
    let solutions: Vec<Vec<u64>> = solution_counts.keys().cloned().collect();
    let edge_count = BigUint::from(k_labeled.edges.len() as u64);
    let c = BigRational::new(
        BigInt::from(k_labeled.edges.len() as u64),
        BigInt::from(k_labeled.n_vertices as u64).pow(k_labeled.uniformity as u32),
    );
    Ok(RepresentationCertificate {
        k_graph: k_labeled,
        h_graph: h0.clone(),
        system: SystemRef::Explicit {
            width: 1,
            num_vars: m,
            solutions,
        },
        label_domain_size: edge_count,
        label_width: 1,
        gamma: vec![BigRational::one(); m],
        p: BigRational::from(BigInt::from(p)),
        c,
        chi1: h0.n_vertices as u64,
        chi2: BigRational::zero(),
        q_values: vec![Vec::new()],
        strong: false,
        transfer: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RpMode {
    /// Class sizes must match the declared constants exactly.
    Exact,
    /// Per-class densities may vary as long as they stay above the floor.
    LowerBound,
}

#[derive(Debug, Clone)]
pub struct RpReport {
    pub rp1: bool,
    pub rp2_domain: bool,
    pub rp2_sizes: bool,
    pub rp2_surjective: bool,
    pub rp3: bool,
    pub rp4: Option<bool>,
    pub lambda: BigRational,
    pub copy_count: u64,
    pub class_count: u64,
    pub counterexamples: Vec<String>,
}

impl RpReport {
    pub fn all_pass(&self) -> bool {
        self.rp1
            && self.rp2_domain
            && self.rp2_sizes
            && self.rp2_surjective
            && self.rp3
            && self.rp4.unwrap_or(true)
    }
}

/// Exhaustive verification of the representability properties.
pub fn verify_rp_properties(
    cert: &RepresentationCertificate,
    mode: RpMode,
    check_strong: bool,
    cap: u64,
) -> Result<RpReport> {
    let m = cert.system.num_vars();
    let s = cert.k_graph.uniformity;
    let h = cert.h_graph.n_vertices;
    let mut counterexamples = Vec::new();

    let mut rp1 = cert.h_graph.uniformity == s && s >= 2 && h > s && cert.chi1 >= h as u64;
    for color in 1..=m {
        if cert.h_graph.edges_of_color(color).count() != 1 {
            rp1 = false;
            counterexamples.push(format!("template color {} is not a single edge", color));
        }
    }
    if cert.k_graph.edges.iter().any(|e| e.label.is_none()) {
        rp1 = false;
        counterexamples.push("host has unlabeled edges".into());
    }
    if !rp1 && counterexamples.is_empty() {
        counterexamples.push(format!(
            "uniformity/size bounds violated: s={}, h={}, chi1={}",
            s, h, cert.chi1
        ));
    }

    let solutions = cert.system.solutions(cap)?;
    let solution_set: BTreeSet<Vec<u64>> = solutions.iter().cloned().collect();
    let copies = enumerate_copies(&cert.h_graph, &cert.k_graph, cap)?;
    let assigned = cert.assign_all(&copies, cap)?;

    let mut rp2_domain = true;
    let mut classes: BTreeMap<(Vec<u64>, Vec<u64>), Vec<usize>> = BTreeMap::new();
    for (ci, (sol, q)) in assigned.iter().enumerate() {
        if !solution_set.contains(sol) {
            rp2_domain = false;
            if counterexamples.len() < 8 {
                counterexamples.push(format!("copy labels {:?} do not solve the system", sol));
            }
            continue;
        }
        classes.entry((sol.clone(), q.clone())).or_default().push(ci);
    }

    let lambda = cert.lambda();
    let gamma_product: BigRational = cert.gamma.iter().product();
    let expected_size = &cert.p * &lambda * &gamma_product;
    let mut rp2_sizes = true;
    for ((sol, q), members) in &classes {
        let size = BigRational::from(BigInt::from(members.len() as u64));
        let ok = match mode {
            RpMode::Exact => size == expected_size,
            RpMode::LowerBound => {
                // Recover the per-class density and compare with the floor.
                let k_pow = BigRational::from(BigInt::from(cert.k_graph.n_vertices as u64))
                    .pow(s as i32);
                let c_class = size
                    * BigRational::from(BigInt::from(cert.label_domain_size.clone()))
                    / (&cert.p * k_pow * &gamma_product);
                c_class >= cert.chi2
            }
        };
        if !ok {
            rp2_sizes = false;
            if counterexamples.len() < 8 {
                counterexamples.push(format!(
                    "class ({:?}, {:?}) has {} copies, expected {}",
                    sol,
                    q,
                    members.len(),
                    expected_size
                ));
            }
        }
    }
    let mut rp2_surjective = true;
    for sol in &solutions {
        for q in &cert.q_values {
            if !classes.contains_key(&(sol.clone(), q.clone())) {
                rp2_surjective = false;
                if counterexamples.len() < 8 {
                    counterexamples.push(format!("class ({:?}, {:?}) is empty", sol, q));
                }
            }
        }
    }

    // RP3: through-edge counts within a class.
    let k_index = cert.k_graph.edge_index();
    let mut rp3 = true;
    let mut rp4 = if check_strong { Some(true) } else { None };
    // Precompute the edges of each color grouped by label for RP4.
    let mut edges_by_color_label: BTreeMap<(usize, Vec<u64>), BTreeSet<usize>> = BTreeMap::new();
    for (idx, e) in cert.k_graph.edges.iter().enumerate() {
        if let Some(l) = &e.label {
            edges_by_color_label
                .entry((e.color, l.clone()))
                .or_default()
                .insert(idx);
        }
    }
    for ((sol, q), members) in &classes {
        let mut through: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        let mut class_edges: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for &ci in members {
            let copy = &copies[ci];
            for color in 1..=m {
                let h_edge = cert.h_graph.edges_of_color(color).next().unwrap();
                let mapped: Vec<usize> = h_edge.verts.iter().map(|&v| copy[v]).collect();
                let canonical = cert.k_graph.canonical_verts(&mapped);
                let idx = k_index[&(color, canonical)];
                *through.entry((color, idx)).or_insert(0) += 1;
                class_edges.entry(color).or_default().insert(idx);
            }
        }
        for ((color, idx), count) in &through {
            let expected = &cert.p * &gamma_product / &cert.gamma[color - 1];
            if BigRational::from(BigInt::from(*count)) != expected {
                rp3 = false;
                if counterexamples.len() < 8 {
                    counterexamples.push(format!(
                        "edge {} colored {} lies in {} copies of class ({:?}, {:?}), expected {}",
                        idx, color, count, sol, q, expected
                    ));
                }
            }
        }
        if check_strong {
            for color in 1..=m {
                let xi = &sol[(color - 1) * cert.label_width..color * cert.label_width];
                let all = edges_by_color_label
                    .get(&(color, xi.to_vec()))
                    .cloned()
                    .unwrap_or_default();
                let present = class_edges.get(&color).cloned().unwrap_or_default();
                if all != present {
                    rp4 = Some(false);
                    if counterexamples.len() < 8 {
                        counterexamples.push(format!(
                            "class ({:?}, {:?}): {} edges labeled {:?} colored {}, {} extendable",
                            sol,
                            q,
                            all.len(),
                            xi,
                            color,
                            present.len()
                        ));
                    }
                }
            }
        }
    }

    Ok(RpReport {
        rp1,
        rp2_domain,
        rp2_sizes,
        rp2_surjective,
        rp3,
        rp4,
        lambda,
        copy_count: copies.len() as u64,
        class_count: classes.len() as u64,
        counterexamples,
    })
}
