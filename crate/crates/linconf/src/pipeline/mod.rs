//! Chains of equivalent systems: affine coordinatewise surjections between
//! solution sets, a certification engine that checks every claimed map by
//! enumeration, and the audited trace of the full reduction.

mod run;
mod split;
mod stages;

pub use run::{partition_by_independent_vectors, run_full_pipeline, PipelineOptions};
pub use split::{circularize, join_systems, split_to_j_systems, SplitEntry, SplitFamily};
pub use stages::{
    block_row_reduce, dehomogenize, determinantal_to_identity, lift_to_homocyclic, pad_stage,
    reduce_equations, row_reduce_stage, simulate_independent_vectors, Dehomogenized, StageOut,
};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::rng::SplitMix64;
use crate::system::{HomSystem, VarDomain};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap, HashSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    OneAuto,
    MuAuto,
    MuEquiv1,
    MuEquiv2,
    EquivalentRowReduce,
    Split,
    Join,
}

impl MapKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            MapKind::OneAuto => "1-auto",
            MapKind::MuAuto => "mu-auto",
            MapKind::MuEquiv1 => "mu-equiv-1",
            MapKind::MuEquiv2 => "mu-equiv-2",
            MapKind::EquivalentRowReduce => "equivalent-rowreduce",
            MapKind::Split => "split",
            MapKind::Join => "join",
        }
    }
}

/// Affine homomorphism between variable domains: `v -> (M v + shift)` with
/// every output slot reduced modulo its own order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    pub matrix: IntMatrix,
    pub shift: Vec<u64>,
    pub target_orders: Vec<u64>,
}

impl AffineMap {
    pub fn identity(orders: &[u64]) -> Self {
        AffineMap {
            matrix: IntMatrix::identity(orders.len()),
            shift: vec![0; orders.len()],
            target_orders: orders.to_vec(),
        }
    }

    pub fn validate(&self, source_orders: &[u64]) -> Result<()> {
        if self.matrix.rows() != self.target_orders.len()
            || self.matrix.cols() != source_orders.len()
            || self.shift.len() != self.target_orders.len()
        {
            return Err(Error::DimensionMismatch("affine map shape".into()));
        }
        for r in 0..self.matrix.rows() {
            for c in 0..self.matrix.cols() {
                let coef = self.matrix.get(r, c);
                if coef.is_zero() {
                    continue;
                }
                let prod = coef * BigInt::from(source_orders[c]);
                if !(&prod % BigInt::from(self.target_orders[r])).is_zero() {
                    return Err(Error::InvalidInput(format!(
                        "affine entry ({}, {}) is not a homomorphism",
                        r, c
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        (0..self.matrix.rows())
            .map(|r| {
                let modulus = self.target_orders[r] as u128;
                let mut acc = self.shift[r] as u128 % modulus;
                for c in 0..self.matrix.cols() {
                    let coef = self.matrix.get(r, c);
                    if coef.is_zero() {
                        continue;
                    }
                    let red = coef
                        .mod_floor(&BigInt::from(self.target_orders[r]))
                        .to_u64()
                        .unwrap() as u128;
                    acc = (acc + red * v[c] as u128) % modulus;
                }
                acc as u64
            })
            .collect()
    }
}

/// Coordinatewise affine map from the solutions of a later system onto the
/// solutions of an earlier one, declared `mu`-to-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceMap {
    /// For each target variable, the index of the source variable feeding it.
    pub sigma: Vec<usize>,
    pub affines: Vec<AffineMap>,
    pub mu: BigUint,
    pub kind: MapKind,
}

/// Precomputed modular form of an equivalence map for fast streaming.
pub(crate) struct ReducedMap {
    /// Per target variable: source variable, source span, target span, and
    /// reduced rows (shift, modulus, terms over source slot offsets).
    vars: Vec<ReducedMapVar>,
    out_len: usize,
}

pub(crate) struct ReducedMapVar {
    src_span: (usize, usize),
    dst_start: usize,
    rows: Vec<(u64, u64, Vec<(usize, u64)>)>,
}

impl ReducedMap {
    pub(crate) fn new(map: &EquivalenceMap, sys1: &HomSystem, sys2: &HomSystem) -> Self {
        let vars = map
            .sigma
            .iter()
            .zip(&map.affines)
            .enumerate()
            .map(|(i, (&src, affine))| {
                let rows = (0..affine.matrix.rows())
                    .map(|r| {
                        let modulus = affine.target_orders[r];
                        let mut terms = Vec::new();
                        for c in 0..affine.matrix.cols() {
                            let coef = affine.matrix.get(r, c);
                            if coef.is_zero() {
                                continue;
                            }
                            let red = coef
                                .mod_floor(&BigInt::from(modulus))
                                .to_u64()
                                .unwrap();
                            if red != 0 {
                                terms.push((c, red));
                            }
                        }
                        (affine.shift[r] % modulus, modulus, terms)
                    })
                    .collect();
                ReducedMapVar {
                    src_span: sys2.var_spans[src],
                    dst_start: sys1.var_spans[i].0,
                    rows,
                }
            })
            .collect();
        ReducedMap {
            vars,
            out_len: sys1.matrix.cols(),
        }
    }

    pub(crate) fn apply(&self, sol2: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.out_len];
        for var in &self.vars {
            let (s, l) = var.src_span;
            let v = &sol2[s..s + l];
            for (r, (shift, modulus, terms)) in var.rows.iter().enumerate() {
                let m = *modulus as u128;
                let mut acc = *shift as u128 % m;
                for &(c, coef) in terms {
                    acc = (acc + coef as u128 * v[c] as u128) % m;
                }
                out[var.dst_start + r] = acc as u64;
            }
        }
        out
    }
}

impl EquivalenceMap {
    pub fn identity(sys: &HomSystem, kind: MapKind) -> Self {
        let affines = (0..sys.num_vars())
            .map(|i| {
                let (s, l) = sys.var_spans[i];
                AffineMap::identity(&sys.col_orders[s..s + l])
            })
            .collect();
        EquivalenceMap {
            sigma: (0..sys.num_vars()).collect(),
            affines,
            mu: BigUint::one(),
            kind,
        }
    }

    pub fn apply(&self, sys1: &HomSystem, sys2: &HomSystem, sol2: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; sys1.matrix.cols()];
        for (i, (&src, affine)) in self.sigma.iter().zip(&self.affines).enumerate() {
            let v = sys2.var_slice(sol2, src);
            let mapped = affine.apply(v);
            let (s, l) = sys1.var_spans[i];
            out[s..s + l].copy_from_slice(&mapped[..l]);
        }
        out
    }

    pub fn validate(&self, sys1: &HomSystem, sys2: &HomSystem) -> Result<()> {
        if self.sigma.len() != sys1.num_vars() || self.affines.len() != sys1.num_vars() {
            return Err(Error::DimensionMismatch(
                "map must cover every target variable".into(),
            ));
        }
        let mut seen = vec![false; sys2.num_vars()];
        for (&src, affine) in self.sigma.iter().zip(&self.affines) {
            if src >= sys2.num_vars() {
                return Err(Error::IndexRange(format!("source variable {}", src)));
            }
            if seen[src] {
                return Err(Error::InvalidInput(
                    "source variable used twice; the index map must be injective".into(),
                ));
            }
            seen[src] = true;
            let (s, l) = sys2.var_spans[src];
            affine.validate(&sys2.col_orders[s..s + l])?;
        }
        Ok(())
    }
}

/// Precomputed modular form of a system for fast membership checks.
pub(crate) struct ReducedChecker {
    rows: Vec<crate::system::ReducedRow>,
    col_orders: Vec<u64>,
}

impl ReducedChecker {
    pub(crate) fn new(sys: &HomSystem) -> Self {
        ReducedChecker {
            rows: sys.reduced_rows(),
            col_orders: sys.col_orders.clone(),
        }
    }

    pub(crate) fn check(&self, x: &[u64]) -> bool {
        if x.len() != self.col_orders.len()
            || x.iter().zip(&self.col_orders).any(|(&v, &o)| v >= o)
        {
            return false;
        }
        self.rows.iter().all(|row| {
            let m = row.modulus as u128;
            let mut acc: u128 = 0;
            for &(c, coef) in &row.terms {
                acc = (acc + coef as u128 * x[c] as u128) % m;
            }
            acc as u64 == row.rhs
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertMode {
    Exhaustive,
    Sampled,
}

/// Result of certifying one equivalence map by enumeration.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub mode: CertMode,
    pub domain_ok: bool,
    pub surjective: bool,
    pub fibers_uniform: bool,
    pub fiber_min: Option<u64>,
    pub fiber_max: Option<u64>,
    pub mu_observed: Option<BigUint>,
    pub mu_declared: BigUint,
    pub mu_matches: bool,
    /// Per target coordinate: fiber size conditioned on that coordinate is
    /// constant over all compatible source values (checked when requested).
    pub coordinate_constancy: Option<Vec<bool>>,
    pub source_count: BigUint,
    pub target_count: BigUint,
    pub count_identity: bool,
    pub probes: Option<(u64, u64)>,
    pub violations: Vec<String>,
}

impl EquivalenceReport {
    pub fn all_pass(&self) -> bool {
        self.domain_ok
            && self.surjective
            && self.fibers_uniform
            && self.mu_matches
            && self.count_identity
            && self
                .coordinate_constancy
                .as_ref()
                .map_or(true, |v| v.iter().all(|&b| b))
    }
}

pub struct VerifyOptions {
    pub cap: u64,
    pub check_coordinate_constancy: bool,
    /// Restrict the target solution set to these domains before comparing.
    pub target_domains: Option<Vec<VarDomain>>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            cap: crate::group::DEFAULT_ENUM_CAP,
            check_coordinate_constancy: false,
            target_domains: None,
        }
    }
}

/// Exhaustive certification: streams the source solutions through the map,
/// checks that every image solves the target, that the map is onto the
/// target solution set, and that all fibers share one size.
pub fn verify_equivalence(
    map: &EquivalenceMap,
    sys1: &HomSystem,
    sys2: &HomSystem,
    opts: &VerifyOptions,
) -> Result<EquivalenceReport> {
    map.validate(sys1, sys2)?;
    let target = sys1.enumerate_solutions(opts.target_domains.as_deref(), opts.cap)?;
    let target_set: HashSet<Vec<u64>> = target.tuples.iter().cloned().collect();
    let mut violations = Vec::new();
    let mut domain_ok = true;

    let mut fibers: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut constancy: Option<Vec<HashMap<(Vec<u64>, Vec<u64>), u64>>> =
        if opts.check_coordinate_constancy {
            Some(vec![HashMap::new(); sys1.num_vars()])
        } else {
            None
        };
    let mut source_count = BigUint::zero();
    let reduced_map = ReducedMap::new(map, sys1, sys2);
    for sol2 in sys2.iter_solutions(opts.cap)? {
        source_count += 1u32;
        let image = reduced_map.apply(&sol2);
        if !target_set.contains(&image) {
            if sys1.is_solution(&image)
                && opts.target_domains.is_some()
            {
                // Image solves the target system but leaves the domain
                // restriction: counts as a surjectivity/domain failure.
            }
            domain_ok = domain_ok && sys1.is_solution(&image);
            if violations.len() < 5 {
                violations.push(format!(
                    "image {:?} of source solution not in the target set",
                    image
                ));
            }
            continue;
        }
        *fibers.entry(image.clone()).or_insert(0) += 1;
        if let Some(per_coord) = constancy.as_mut() {
            for i in 0..sys1.num_vars() {
                let v = sys2.var_slice(&sol2, map.sigma[i]).to_vec();
                *per_coord[i].entry((image.clone(), v)).or_insert(0) += 1;
            }
        }
    }

    let surjective = fibers.len() == target_set.len()
        && target_set.iter().all(|t| fibers.contains_key(t));
    let fiber_min = fibers.values().min().copied();
    let fiber_max = fibers.values().max().copied();
    let fibers_uniform = fiber_min == fiber_max && fiber_min.is_some();
    let mu_observed = if fibers_uniform {
        fiber_min.map(BigUint::from)
    } else {
        None
    };
    let mu_matches = mu_observed.as_ref() == Some(&map.mu) && surjective && domain_ok;
    let target_count = BigUint::from(target_set.len() as u64);
    let count_identity = &map.mu * &target_count == source_count;

    let coordinate_constancy = constancy.map(|per_coord| {
        per_coord
            .into_iter()
            .enumerate()
            .map(|(i, counts)| {
                // Group by target solution; within a group, the count per
                // compatible source value must be constant. Compatibility
                // includes source projections that map to the coordinate but
                // never appear in the fiber, so collect the projection first.
                let mut proj: std::collections::BTreeSet<Vec<u64>> = Default::default();
                for (_, v) in counts.keys() {
                    proj.insert(v.clone());
                }
                let mut by_target: BTreeMap<Vec<u64>, BTreeMap<Vec<u64>, u64>> = BTreeMap::new();
                for ((x, v), c) in &counts {
                    by_target.entry(x.clone()).or_default().insert(v.clone(), *c);
                }
                by_target.iter().all(|(x, per_value)| {
                    let (s, l) = sys1.var_spans[i];
                    let xi = &x[s..s + l];
                    let compatible: Vec<&Vec<u64>> = proj
                        .iter()
                        .filter(|v| map.affines[i].apply(v) == xi)
                        .collect();
                    let mut sizes: Vec<u64> = compatible
                        .iter()
                        .map(|v| per_value.get(*v).copied().unwrap_or(0))
                        .collect();
                    sizes.dedup();
                    sizes.len() <= 1
                })
            })
            .collect()
    });

    Ok(EquivalenceReport {
        mode: CertMode::Exhaustive,
        domain_ok,
        surjective,
        fibers_uniform,
        fiber_min,
        fiber_max,
        mu_observed,
        mu_declared: map.mu.clone(),
        mu_matches,
        coordinate_constancy,
        source_count,
        target_count,
        count_identity,
        probes: None,
        violations,
    })
}

/// Sampled certification for stages whose source set exceeds the cap:
/// closed-form count identity plus uniform random membership probes.
pub fn sampled_certificate(
    map: &EquivalenceMap,
    sys1: &HomSystem,
    sys2: &HomSystem,
    probes: u64,
    seed: u64,
    cap: u64,
) -> Result<EquivalenceReport> {
    map.validate(sys1, sys2)?;
    let head = sys2.identity_head().ok_or_else(|| {
        Error::Precondition("sampling needs an identity-headed source system".into())
    })?;
    let source_count = sys2.count_solutions(cap).unwrap_or_else(|_| {
        sys2.col_orders[head..]
            .iter()
            .map(|&o| BigUint::from(o))
            .product()
    });
    let target_count = sys1.count_solutions(cap)?;
    let count_identity = &map.mu * &target_count == source_count;

    let mut rng = SplitMix64::new(seed);
    let mut ok = 0u64;
    let mut violations = Vec::new();
    let reduced = sys2.reduced_rows();
    let reduced_map = ReducedMap::new(map, sys1, sys2);
    let target_checker = ReducedChecker::new(sys1);
    for _ in 0..probes {
        let mut full = vec![0u64; sys2.matrix.cols()];
        for c in head..sys2.matrix.cols() {
            if sys2.col_orders[c] > 1 {
                full[c] = rng.below(sys2.col_orders[c]);
            }
        }
        for r in 0..head {
            let row = &reduced[r];
            let modulus = row.modulus as u128;
            let mut acc: u128 = 0;
            for &(c, coef) in &row.terms {
                if c < head {
                    continue;
                }
                acc = (acc + coef as u128 * full[c] as u128) % modulus;
            }
            full[r] = ((row.rhs as u128 + modulus - acc) % modulus) as u64;
        }
        let image = reduced_map.apply(&full);
        if target_checker.check(&image) {
            ok += 1;
        } else if violations.len() < 5 {
            violations.push(format!("probe image {:?} fails the target system", image));
        }
    }

    Ok(EquivalenceReport {
        mode: CertMode::Sampled,
        domain_ok: ok == probes,
        surjective: true,
        fibers_uniform: true,
        fiber_min: None,
        fiber_max: None,
        mu_observed: None,
        mu_declared: map.mu.clone(),
        mu_matches: count_identity,
        coordinate_constancy: None,
        source_count,
        target_count,
        count_identity,
        probes: Some((ok, probes)),
        violations,
    })
}

/// One audited step of the reduction chain.
#[derive(Debug, Clone)]
pub struct Stage {
    pub label: String,
    pub system: HomSystem,
    pub map_to_prev: Option<EquivalenceMap>,
    pub mu: BigUint,
    pub cert: Option<EquivalenceReport>,
    pub notes: Vec<String>,
    pub solution_count: Option<BigUint>,
}

#[derive(Debug, Clone)]
pub struct PipelineTrace {
    pub stages: Vec<Stage>,
    pub split: Option<SplitFamily>,
    pub final_is_circular: bool,
    pub no_solution: bool,
    /// Product of the stage multiplicities along the audited chain.
    pub total_mu: BigUint,
    pub composite_cert: Option<EquivalenceReport>,
}

impl PipelineTrace {
    pub fn all_stages_pass(&self) -> bool {
        self.stages
            .iter()
            .all(|s| s.cert.as_ref().map_or(true, |c| c.all_pass()))
    }

    pub fn all_exhaustive(&self) -> bool {
        self.stages.iter().all(|s| {
            s.cert
                .as_ref()
                .map_or(true, |c| c.mode == CertMode::Exhaustive)
        })
    }
}
