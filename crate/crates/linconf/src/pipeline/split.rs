//! Splitting an identity-headed system into the family of auxiliary systems
//! indexed by its divisor grid, making each of them circular, and joining
//! the results into one system over the product of the kernel groups.

use super::{AffineMap, EquivalenceMap, MapKind};
use crate::error::{Error, Result};
use crate::matrix::{circular_extension, extend_to_det, is_block_n_circular, IntMatrix};
use crate::system::{HomSystem, VarDomain};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeSet;

/// One member of the split family: the auxiliary system for one divisor,
/// its kernel group order, the map onto the restricted solutions of the
/// parent, and (after circularization) the stacked circular system.
#[derive(Debug, Clone)]
pub struct SplitEntry {
    /// `None` marks the base entry carrying the full cyclic group.
    pub kappa: Option<(usize, usize)>,
    pub divisor: Option<BigInt>,
    /// Order of the kernel group the variables range over.
    pub g: u64,
    pub j_system: HomSystem,
    pub f_map: EquivalenceMap,
    /// Domains restricting the parent system to the kernel subgroup.
    pub parent_domains: Vec<VarDomain>,
    pub jbar_system: Option<HomSystem>,
    pub circ_map: Option<EquivalenceMap>,
    pub circular_ok: Option<bool>,
    pub f_report: Option<super::EquivalenceReport>,
    pub circ_report: Option<super::EquivalenceReport>,
}

#[derive(Debug, Clone)]
pub struct SplitFamily {
    pub entries: Vec<SplitEntry>,
    pub t: usize,
    pub n: u64,
    /// Head block count of the parent system.
    pub m: usize,
    /// Tail block count of the auxiliary systems (= m + 1).
    pub q: usize,
}

fn subgroup_domain(t: usize, n: u64, g: u64) -> VarDomain {
    let step = n / g;
    let mut out = BTreeSet::new();
    let mut idx = vec![0u64; t];
    loop {
        out.insert(idx.iter().map(|&a| a * step).collect());
        let mut pos = t;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < g {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn j_system(matrix: IntMatrix, t: usize, g: u64) -> Result<HomSystem> {
    let rows = matrix.rows();
    let cols = matrix.cols();
    HomSystem::new(
        matrix,
        vec![0; rows],
        vec![g.max(1); rows],
        vec![g.max(1); cols],
        (0..cols / t).map(|i| (i * t, t)).collect(),
        (0..rows / t).map(|j| (j * t, t)).collect(),
    )
}

/// The map carrying solutions of an auxiliary system into the parent's
/// solutions restricted to the kernel subgroup: head coordinates are scaled
/// by their divisors, tails embedded, and the last variable dropped.
fn f_kappa_map(
    m: usize,
    t: usize,
    n: u64,
    g: u64,
    divisors: &[Vec<BigInt>],
) -> EquivalenceMap {
    let embed = BigInt::from(n / g);
    let mut sigma = Vec::with_capacity(2 * m);
    let mut affines = Vec::with_capacity(2 * m);
    for i in 0..m {
        sigma.push(i);
        affines.push(AffineMap {
            matrix: IntMatrix::from_fn(t, t, |r, c| {
                if r == c {
                    &divisors[i][r] * &embed
                } else {
                    BigInt::zero()
                }
            }),
            shift: vec![0; t],
            target_orders: vec![n; t],
        });
    }
    for j in 0..m {
        sigma.push(m + 1 + j);
        affines.push(AffineMap {
            matrix: IntMatrix::from_fn(t, t, |r, c| {
                if r == c {
                    embed.clone()
                } else {
                    BigInt::zero()
                }
            }),
            shift: vec![0; t],
            target_orders: vec![n; t],
        });
    }
    EquivalenceMap {
        sigma,
        affines,
        mu: BigUint::from(g).pow(t as u32),
        kind: MapKind::Split,
    }
}

/// Builds the family of auxiliary systems: one base entry over the full
/// cyclic group and one entry per (block, row) divisor, each shaped
/// `(I | B)` with every tail block of unit determinantal.
pub fn split_to_j_systems(a6: &HomSystem, divisors: &[Vec<BigInt>]) -> Result<SplitFamily> {
    let (t, n) = a6
        .uniform_block()
        .ok_or_else(|| Error::Precondition("splitting needs a uniform system".into()))?;
    let head = a6
        .identity_head()
        .ok_or_else(|| Error::Precondition("splitting expects an identity head".into()))?;
    let m = head / t;
    if a6.matrix.cols() - head != head {
        return Err(Error::DimensionMismatch(
            "expected as many tail columns as head columns".into(),
        ));
    }
    if divisors.len() != m || divisors.iter().any(|d| d.len() != t) {
        return Err(Error::DimensionMismatch("divisor grid must be m x t".into()));
    }
    let all_rows: Vec<usize> = (0..head).collect();
    let tail_cols: Vec<usize> = (head..a6.matrix.cols()).collect();
    let b1 = a6.matrix.submatrix(&all_rows, &tail_cols);
    let mut b2 = IntMatrix::zero(head, head);
    for i in 0..m {
        for j in 0..t {
            let r = i * t + j;
            let d = &divisors[i][j];
            if d.is_zero() {
                return Err(Error::DegenerateSystem(format!(
                    "zero divisor at block {}, row {}",
                    i, j
                )));
            }
            for c in 0..head {
                let (quot, rem) = b1.get(r, c).div_rem(d);
                if !rem.is_zero() {
                    return Err(Error::Precondition(format!(
                        "divisor {} does not divide tail row {}",
                        d, r
                    )));
                }
                b2.set(r, c, quot);
            }
        }
    }
    let q = m + 1;
    let big = t * q;
    let mut entries = Vec::new();

    // Base entry over the full cyclic group: tail [[B2, 0], [0, I_t]].
    let base_b3 = IntMatrix::from_fn(big, big, |r, c| {
        if r < head && c < head {
            b2.get(r, c).clone()
        } else if r >= head && c >= head && (r - head) == (c - head) {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    });
    let base_matrix = IntMatrix::hstack(&IntMatrix::identity(big), &base_b3);
    entries.push(SplitEntry {
        kappa: None,
        divisor: None,
        g: n,
        j_system: j_system(base_matrix, t, n)?,
        f_map: f_kappa_map(m, t, n, n, divisors),
        parent_domains: vec![subgroup_domain(t, n, n); a6.num_vars()],
        jbar_system: None,
        circ_map: None,
        circular_ok: None,
        f_report: None,
        circ_report: None,
    });

    for i in 0..m {
        for j in 0..t {
            let d = &divisors[i][j];
            let g = d.gcd(&BigInt::from(n)).to_u64().unwrap();
            let b3 = IntMatrix::from_fn(big, big, |r, c| {
                if r < head && c < head {
                    if r == i * t + j {
                        b1.get(r, c).clone()
                    } else {
                        b2.get(r, c).clone()
                    }
                } else if r < head && c >= head {
                    if r == i * t + j && c == head {
                        -BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                } else if r >= head && c >= head && (r - head) == (c - head) {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            });
            let matrix = IntMatrix::hstack(&IntMatrix::identity(big), &b3);
            entries.push(SplitEntry {
                kappa: Some((i, j)),
                divisor: Some(d.clone()),
                g,
                j_system: j_system(matrix, t, g)?,
                f_map: f_kappa_map(m, t, n, g, divisors),
                parent_domains: vec![subgroup_domain(t, n, g); a6.num_vars()],
                jbar_system: None,
                circ_map: None,
                circular_ok: None,
                f_report: None,
                circ_report: None,
            });
        }
    }
    Ok(SplitFamily { entries, t, n, m, q })
}

/// Replaces an auxiliary system by its circular extension: every tail block
/// is completed to a determinant-one square, stacked between identities and
/// triangular paddings, so that all column windows have determinant coprime
/// to the modulus.
pub fn circularize(entry: &mut SplitEntry, t: usize, n: u64) -> Result<()> {
    let sys = &entry.j_system;
    let head = sys
        .identity_head()
        .ok_or_else(|| Error::Precondition("circularization expects an identity head".into()))?;
    let k_j = head / t;
    let all_rows: Vec<usize> = (0..head).collect();
    let tail_cols: Vec<usize> = (head..sys.matrix.cols()).collect();
    let b3 = sys.matrix.submatrix(&all_rows, &tail_cols);
    let r = b3.cols();
    let q = r / t;

    let mut stack_parts: Vec<IntMatrix> = vec![IntMatrix::identity(r)];
    for i in 0..k_j {
        let rows_i: Vec<usize> = (i * t..(i + 1) * t).collect();
        let cols_i: Vec<usize> = (0..r).collect();
        let block = b3.submatrix(&rows_i, &cols_i);
        let b4 = extend_to_det(&block)?;
        if b4.det() != BigInt::one() {
            return Err(Error::Precondition(format!(
                "tail block {} does not extend to determinant one",
                i
            )));
        }
        let ext = circular_extension(&b4, n)?;
        let row_ids = |lo: usize, hi: usize| -> Vec<usize> { (lo..hi).collect() };
        let col_ids: Vec<usize> = (0..r).collect();
        let s_part = ext.submatrix(&row_ids(r, 2 * r), &col_ids);
        let mid = ext.submatrix(&row_ids(2 * r, 3 * r), &col_ids);
        debug_assert_eq!(mid, b4);
        let t_part = ext.submatrix(&row_ids(3 * r, 4 * r), &col_ids);
        stack_parts.push(s_part);
        stack_parts.push(b4);
        stack_parts.push(t_part);
        stack_parts.push(IntMatrix::identity(r));
    }
    let b9 = stack_parts
        .into_iter()
        .reduce(|acc, next| IntMatrix::vstack(&acc, &next))
        .unwrap();
    let kbar = b9.rows();
    let matrix = IntMatrix::hstack(&IntMatrix::identity(kbar), &b9);
    let circular = is_block_n_circular(&matrix, 1, n)?;
    let jbar = j_system(matrix, t, entry.g)?;

    // Original head variable i sits as the first block of its extended
    // square; the tails are shared verbatim.
    let mut sigma = Vec::with_capacity(k_j + q);
    for i in 0..k_j {
        sigma.push((4 * i + 2) * q);
    }
    let kbar_blocks = kbar / t;
    for j in 0..q {
        sigma.push(kbar_blocks + j);
    }
    let orders = vec![entry.g.max(1); t];
    let affines = (0..k_j + q).map(|_| AffineMap::identity(&orders)).collect();
    entry.jbar_system = Some(jbar);
    entry.circ_map = Some(EquivalenceMap {
        sigma,
        affines,
        mu: BigUint::one(),
        kind: MapKind::OneAuto,
    });
    entry.circular_ok = Some(circular);
    Ok(())
}

/// Joins the circularized family into a single system over the product of
/// the kernel groups, interleaving the scalar slots variable by variable,
/// and returns the map onto the parent system with its multiplicity.
pub fn join_systems(
    family: &SplitFamily,
    divisors: &[Vec<BigInt>],
) -> Result<(HomSystem, EquivalenceMap)> {
    let t = family.t;
    let n = family.n;
    let m = family.m;
    let q = family.q;
    let active: Vec<&SplitEntry> = family.entries.iter().filter(|e| e.g > 1).collect();
    if active.is_empty() {
        return Err(Error::Precondition("no active systems to join".into()));
    }
    for e in &active {
        if e.jbar_system.is_none() {
            return Err(Error::Precondition(
                "all active systems must be circularized before joining".into(),
            ));
        }
    }
    let a = active.len();
    let first = active[0].jbar_system.as_ref().unwrap();
    let kbar = first.matrix.rows();
    let mbar_cols = first.matrix.cols();
    if active
        .iter()
        .any(|e| {
            let s = e.jbar_system.as_ref().unwrap();
            s.matrix.rows() != kbar || s.matrix.cols() != mbar_cols
        })
    {
        return Err(Error::DimensionMismatch(
            "all circular systems must share dimensions".into(),
        ));
    }

    // Interleave: scalar position p of a component system lands at
    // p * a + component index.
    let rows = kbar * a;
    let cols = mbar_cols * a;
    let mut matrix = IntMatrix::zero(rows, cols);
    let mut row_moduli = vec![1u64; rows];
    let mut col_orders = vec![1u64; cols];
    for (ai, e) in active.iter().enumerate() {
        let sysk = e.jbar_system.as_ref().unwrap();
        for p in 0..kbar {
            row_moduli[p * a + ai] = e.g;
        }
        for p in 0..mbar_cols {
            col_orders[p * a + ai] = e.g;
        }
        for rr in 0..kbar {
            for cc in 0..mbar_cols {
                let v = sysk.matrix.get(rr, cc);
                if !v.is_zero() {
                    matrix.set(rr * a + ai, cc * a + ai, v.clone());
                }
            }
        }
    }
    let width = t * a;
    let joined = HomSystem::new(
        matrix,
        vec![0; rows],
        row_moduli,
        col_orders,
        (0..cols / width).map(|i| (i * width, width)).collect(),
        (0..rows / width).map(|j| (j * width, width)).collect(),
    )?;

    // Map onto the parent: head variables are divisor-weighted sums of the
    // kernel components, tails plain sums, everything embedded in Z_n.
    let mut sigma = Vec::with_capacity(2 * m);
    let mut affines = Vec::with_capacity(2 * m);
    let kbar_blocks = kbar / t;
    for i in 0..m {
        sigma.push((4 * i + 2) * q);
        affines.push(AffineMap {
            matrix: IntMatrix::from_fn(t, width, |r, c| {
                if c / a == r {
                    let e = &active[c % a];
                    &divisors[i][r] * BigInt::from(n / e.g)
                } else {
                    BigInt::zero()
                }
            }),
            shift: vec![0; t],
            target_orders: vec![n; t],
        });
    }
    for j in 0..m {
        sigma.push(kbar_blocks + j);
        affines.push(AffineMap {
            matrix: IntMatrix::from_fn(t, width, |r, c| {
                if c / a == r {
                    let e = &active[c % a];
                    BigInt::from(n / e.g)
                } else {
                    BigInt::zero()
                }
            }),
            shift: vec![0; t],
            target_orders: vec![n; t],
        });
    }

    let source_count: BigUint = joined.count_solutions(u64::MAX).unwrap_or_else(|_| {
        active
            .iter()
            .map(|e| BigUint::from(e.g).pow((t * q) as u32))
            .product()
    });
    let target_count = BigUint::from(n).pow((t * m) as u32);
    let (mu, rem) = source_count.div_rem(&target_count);
    if !rem.is_zero() {
        return Err(Error::Precondition(
            "joined solution count is not a multiple of the parent count".into(),
        ));
    }
    Ok((
        joined,
        EquivalenceMap {
            sigma,
            affines,
            mu,
            kind: MapKind::Join,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteAbelianGroup, DEFAULT_ENUM_CAP};
    use crate::pipeline::{
        block_row_reduce, determinantal_to_identity, row_reduce_stage,
        simulate_independent_vectors, verify_equivalence, VerifyOptions,
    };

    fn scalar_sys(rows: &[Vec<i64>], n: u64) -> HomSystem {
        let g = FiniteAbelianGroup::normalize(&[n]).unwrap();
        let m = IntMatrix::from_i64_rows(rows);
        HomSystem::scalar(&m, &g, &vec![g.zero(); rows.len()]).unwrap()
    }

    fn reduce_to_a6(rows: &[Vec<i64>], n: u64) -> (HomSystem, Vec<Vec<BigInt>>) {
        let sys = scalar_sys(rows, n);
        let (rr, diag) = row_reduce_stage(&sys).unwrap();
        let sim = simulate_independent_vectors(&rr.system, &diag).unwrap();
        let idf = determinantal_to_identity(&sim.system).unwrap();
        let (brr, divisors) = block_row_reduce(&idf.system).unwrap();
        (brr.system, divisors)
    }

    #[test]
    fn split_family_shapes_and_f_maps() {
        let (a6, divisors) = reduce_to_a6(&[vec![1, 1, 1]], 5);
        let family = split_to_j_systems(&a6, &divisors).unwrap();
        assert_eq!(family.entries.len(), 1 + family.m * family.t);
        // All divisors are one here, so only the base entry is nontrivial.
        assert!(family.entries[1..].iter().all(|e| e.g == 1));

        for entry in &family.entries {
            let head = entry.j_system.identity_head().unwrap();
            assert_eq!(head, family.t * (family.m + 1));
            // Tail blocks have unit determinantal.
            let sys = &entry.j_system;
            let all_rows: Vec<usize> = (0..head).collect();
            let tail: Vec<usize> = (head..sys.matrix.cols()).collect();
            let b3 = sys.matrix.submatrix(&all_rows, &tail);
            for i in 0..head / family.t {
                let rows_i: Vec<usize> = (i * family.t..(i + 1) * family.t).collect();
                let cols_i: Vec<usize> = (0..b3.cols()).collect();
                let block = b3.submatrix(&rows_i, &cols_i);
                assert!(block
                    .determinantal_divisor(family.t)
                    .unwrap()
                    .is_one());
            }
            // f map lands exactly on the restricted parent solutions.
            let report = verify_equivalence(
                &entry.f_map,
                &a6,
                &entry.j_system,
                &VerifyOptions {
                    cap: DEFAULT_ENUM_CAP,
                    check_coordinate_constancy: false,
                    target_domains: Some(entry.parent_domains.clone()),
                },
            )
            .unwrap();
            assert!(report.all_pass(), "entry {:?}: {:?}", entry.kappa, report);
        }
    }

    #[test]
    fn split_with_nontrivial_kernel() {
        // (I | 2) over Z4: the single divisor is 2, its kernel has order 2.
        let g4 = FiniteAbelianGroup::normalize(&[4]).unwrap();
        let m = IntMatrix::from_i64_rows(&[vec![1, 2]]);
        let a6ish = HomSystem::scalar(&m, &g4, &[g4.zero()]).unwrap();
        let divisors = vec![vec![BigInt::from(2)]];
        let family = split_to_j_systems(&a6ish, &divisors).unwrap();
        let entry = &family.entries[1];
        assert_eq!(entry.g, 2);
        let report = verify_equivalence(
            &entry.f_map,
            &a6ish,
            &entry.j_system,
            &VerifyOptions {
                cap: DEFAULT_ENUM_CAP,
                check_coordinate_constancy: false,
                target_domains: Some(entry.parent_domains.clone()),
            },
        )
        .unwrap();
        assert!(report.all_pass(), "{:?}", report);
        assert_eq!(report.mu_observed, Some(BigUint::from(2u32)));
    }

    #[test]
    fn circularized_systems_pass_window_checks() {
        let (a6, divisors) = reduce_to_a6(&[vec![1, 1, 1]], 5);
        let mut family = split_to_j_systems(&a6, &divisors).unwrap();
        let t = family.t;
        let n = family.n;
        for entry in family.entries.iter_mut() {
            circularize(entry, t, n).unwrap();
            assert_eq!(entry.circular_ok, Some(true));
            let jbar = entry.jbar_system.as_ref().unwrap();
            if entry.g > 1 {
                let report = verify_equivalence(
                    entry.circ_map.as_ref().unwrap(),
                    &entry.j_system,
                    jbar,
                    &VerifyOptions::default(),
                )
                .unwrap();
                assert!(report.all_pass(), "{:?}", report);
            }
        }
    }

    #[test]
    fn join_recovers_parent_counts() {
        let (a6, divisors) = reduce_to_a6(&[vec![1, 1, 1]], 5);
        let mut family = split_to_j_systems(&a6, &divisors).unwrap();
        let (t, n) = (family.t, family.n);
        for entry in family.entries.iter_mut() {
            circularize(entry, t, n).unwrap();
        }
        let (joined, map) = join_systems(&family, &divisors).unwrap();
        // Only the base system is active, so the join is that system alone.
        assert_eq!(
            joined.matrix.rows(),
            family.entries[0].jbar_system.as_ref().unwrap().matrix.rows()
        );
        let report = verify_equivalence(
            &map,
            &a6,
            &joined,
            &VerifyOptions {
                cap: DEFAULT_ENUM_CAP,
                check_coordinate_constancy: true,
                target_domains: None,
            },
        )
        .unwrap();
        assert!(report.all_pass(), "{:?}", report);
        assert!(is_block_n_circular(&joined.matrix, 1, n).unwrap());
    }
}
