//! The individual reduction stages, each returning the next system together
//! with the map that sends its solutions onto the previous stage's.

use super::{AffineMap, EquivalenceMap, MapKind};
use crate::error::{Error, Result};
use crate::group::increment_mixed_radix;
use crate::matrix::{
    divide_rows_by_gcd, extend_to_det, row_reduce_to_gcd_rows, smith_normal_form, IntMatrix,
};
use crate::system::HomSystem;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Debug, Clone)]
pub struct StageOut {
    pub system: HomSystem,
    pub map: EquivalenceMap,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub enum Dehomogenized {
    NoSolution,
    Shifted(StageOut),
}

/// Reduces to a homogeneous system by shifting along the lexicographically
/// least particular solution; an unsolvable right-hand side is a value, not
/// an error.
pub fn dehomogenize(sys: &HomSystem, cap: u64) -> Result<Dehomogenized> {
    if sys.rhs_is_zero() {
        return Ok(Dehomogenized::Shifted(StageOut {
            system: sys.clone(),
            map: EquivalenceMap::identity(sys, MapKind::OneAuto),
            notes: vec!["already homogeneous".into()],
        }));
    }
    let total = sys.total_assignments();
    if total > BigUint::from(cap) {
        return Err(Error::CapExceeded {
            needed: total.to_string(),
            cap,
        });
    }
    // Full scan runs in lexicographic order, so the first hit is least.
    let mut x = vec![0u64; sys.matrix.cols()];
    let particular = loop {
        if sys.is_solution(&x) {
            break Some(x.clone());
        }
        if !increment_mixed_radix(&mut x, &sys.col_orders) {
            break None;
        }
    };
    let y = match particular {
        None => return Ok(Dehomogenized::NoSolution),
        Some(y) => y,
    };
    let mut homogeneous = sys.clone();
    homogeneous.rhs = vec![0; sys.rhs.len()];
    let affines = (0..sys.num_vars())
        .map(|i| {
            let (s, l) = sys.var_spans[i];
            AffineMap {
                matrix: IntMatrix::identity(l),
                shift: y[s..s + l].to_vec(),
                target_orders: sys.col_orders[s..s + l].to_vec(),
            }
        })
        .collect();
    Ok(Dehomogenized::Shifted(StageOut {
        system: homogeneous,
        map: EquivalenceMap {
            sigma: (0..sys.num_vars()).collect(),
            affines,
            mu: BigUint::one(),
            kind: MapKind::OneAuto,
        },
        notes: vec![format!("shift by particular solution {:?}", y)],
    }))
}

/// Lifts the system to the homocyclic cover: every slot order becomes the
/// least common multiple `n`, rows are rescaled by `n / modulus`, and the
/// map is the coordinatewise reduction with full product fibers.
pub fn lift_to_homocyclic(sys: &HomSystem) -> Result<StageOut> {
    let (_, w) = *sys
        .var_spans
        .first()
        .ok_or_else(|| Error::DimensionMismatch("no variables".into()))?;
    let first_orders = sys.col_orders[..w].to_vec();
    for &(s, l) in &sys.var_spans {
        if l != w || sys.col_orders[s..s + l] != first_orders[..] {
            return Err(Error::Precondition(
                "lift needs identically shaped variables".into(),
            ));
        }
    }
    let n = sys
        .col_orders
        .iter()
        .chain(sys.row_moduli.iter())
        .fold(1u64, |acc, &o| acc.lcm(&o));
    if sys.col_orders.iter().all(|&o| o == n) && sys.row_moduli.iter().all(|&m| m == n) {
        return Ok(StageOut {
            system: sys.clone(),
            map: EquivalenceMap::identity(sys, MapKind::MuEquiv1),
            notes: vec!["already homocyclic; identity lift".into()],
        });
    }
    let lifted_matrix = IntMatrix::from_fn(sys.matrix.rows(), sys.matrix.cols(), |r, c| {
        sys.matrix.get(r, c) * BigInt::from(n / sys.row_moduli[r])
    });
    let lifted_rhs: Vec<u64> = sys
        .rhs
        .iter()
        .zip(&sys.row_moduli)
        .map(|(&b, &m)| (b % m) * (n / m) % n)
        .collect();
    let lifted = HomSystem::new(
        lifted_matrix,
        lifted_rhs,
        vec![n; sys.matrix.rows()],
        vec![n; sys.matrix.cols()],
        sys.var_spans.clone(),
        sys.eq_spans.clone(),
    )?;
    let fiber_per_var: BigUint = first_orders.iter().map(|&o| BigUint::from(n / o)).product();
    let mu = num_traits::pow::pow(fiber_per_var, sys.num_vars());
    let affines = (0..sys.num_vars())
        .map(|_| AffineMap {
            matrix: IntMatrix::identity(w),
            shift: vec![0; w],
            target_orders: first_orders.clone(),
        })
        .collect();
    Ok(StageOut {
        system: lifted,
        map: EquivalenceMap {
            sigma: (0..sys.num_vars()).collect(),
            affines,
            mu,
            kind: MapKind::MuEquiv1,
        },
        notes: vec![format!("lifted to exponent {}", n)],
    })
}

/// Drops integer-zero rows after a unimodular row reduction; used when the
/// system has more equations than variables. Requires a homogeneous system
/// so dropped rows are trivially satisfied.
pub fn reduce_equations(sys: &HomSystem) -> Result<Option<StageOut>> {
    if sys.matrix.rows() <= sys.matrix.cols() {
        return Ok(None);
    }
    let (t, n) = sys
        .uniform_block()
        .ok_or_else(|| Error::Precondition("equation reduction needs a uniform system".into()))?;
    if !sys.rhs_is_zero() {
        return Err(Error::Precondition(
            "equation reduction runs on homogeneous systems".into(),
        ));
    }
    let snf = smith_normal_form(&sys.matrix);
    let reduced = snf.u.mul(&sys.matrix);
    let keep: Vec<usize> = (0..reduced.rows())
        .filter(|&r| reduced.row(r).iter().any(|e| !e.is_zero()))
        .collect();
    let all_cols: Vec<usize> = (0..reduced.cols()).collect();
    let trimmed = if keep.is_empty() {
        // Everything was redundant; keep one trivial equation block so the
        // later stages always see at least one equation.
        IntMatrix::zero(t, reduced.cols())
    } else {
        reduced.submatrix(&keep, &all_cols)
    };
    let rows = trimmed.rows();
    let eq_spans = if rows % t == 0 && rows > 0 {
        (0..rows / t).map(|j| (j * t, t)).collect()
    } else {
        (0..rows).map(|r| (r, 1)).collect()
    };
    let system = HomSystem::new(
        trimmed,
        vec![0; rows],
        vec![n; rows],
        sys.col_orders.clone(),
        sys.var_spans.clone(),
        eq_spans,
    )?;
    let map = EquivalenceMap::identity(&system, MapKind::EquivalentRowReduce);
    Ok(Some(StageOut {
        system,
        map,
        notes: vec![format!(
            "dropped {} redundant equations",
            sys.matrix.rows() - rows
        )],
    }))
}

/// Pads with two zero-acting variables when the variable count is below
/// equations + 2. The map is the projection dropping them.
pub fn pad_stage(sys: &HomSystem) -> Result<Option<StageOut>> {
    let k_logical = sys.eq_spans.len();
    if sys.num_vars() >= k_logical + 2 {
        return Ok(None);
    }
    let padded = sys.pad_variables()?;
    let mu = sys.domain_size(0) * sys.domain_size(0);
    let affines = (0..sys.num_vars())
        .map(|i| {
            let (s, l) = sys.var_spans[i];
            AffineMap::identity(&sys.col_orders[s..s + l])
        })
        .collect();
    Ok(Some(StageOut {
        system: padded,
        map: EquivalenceMap {
            sigma: (0..sys.num_vars()).collect(),
            affines,
            mu,
            kind: MapKind::MuAuto,
        },
        notes: vec!["padded with two zero-acting variables".into()],
    }))
}

/// Unimodular row reduction exposing the row gcds as the diagonal
/// invariants; a rank-deficient matrix is first repaired by adding the
/// smallest power of the exponent along the leading diagonal.
pub fn row_reduce_stage(sys: &HomSystem) -> Result<(StageOut, Vec<BigInt>)> {
    let (_, n) = sys
        .uniform_block()
        .ok_or_else(|| Error::Precondition("row reduction needs a uniform system".into()))?;
    if !sys.rhs_is_zero() {
        return Err(Error::Precondition("row reduction expects a homogeneous system".into()));
    }
    let mut notes = Vec::new();
    let mut work = sys.matrix.clone();
    let mut snf = smith_normal_form(&work);
    if snf.diag.iter().any(|d| d.is_zero()) {
        let rr = work.rows();
        let mut e = 1u32;
        loop {
            let step = BigInt::from(n).pow(e);
            let mut candidate = work.clone();
            for r in 0..rr {
                let v = candidate.get(r, r) + &step;
                candidate.set(r, r, v);
            }
            let cand_snf = smith_normal_form(&candidate);
            if cand_snf.diag.iter().all(|d| !d.is_zero()) {
                notes.push(format!(
                    "rank repair: added {}^{} along the diagonal",
                    n, e
                ));
                work = candidate;
                snf = cand_snf;
                break;
            }
            e += 1;
        }
    }
    let (reduced, _u) = row_reduce_to_gcd_rows(&work)?;
    let system = HomSystem::new(
        reduced,
        sys.rhs.clone(),
        sys.row_moduli.clone(),
        sys.col_orders.clone(),
        sys.var_spans.clone(),
        sys.eq_spans.clone(),
    )?;
    let map = EquivalenceMap::identity(&system, MapKind::EquivalentRowReduce);
    Ok((
        StageOut {
            system,
            map,
            notes,
        },
        snf.diag,
    ))
}

/// Divides every row by its gcd and attaches one simulating column per row,
/// with coefficient `n / gcd(n, d)`; the multiplicity collects one factor
/// `n / gcd(n, d)` per scalar row.
pub fn simulate_independent_vectors(
    sys: &HomSystem,
    diag: &[BigInt],
) -> Result<StageOut> {
    let (t, n) = sys
        .uniform_block()
        .ok_or_else(|| Error::Precondition("simulation needs a uniform system".into()))?;
    let rows = sys.matrix.rows();
    if rows % t != 0 {
        return Err(Error::DimensionMismatch("rows must be block aligned".into()));
    }
    let divided = divide_rows_by_gcd(&sys.matrix, diag)?;
    let n_big = BigInt::from(n);
    let mut mu = BigUint::one();
    let y = IntMatrix::from_fn(rows, rows, |r, c| {
        if r == c {
            let g = diag[r].gcd(&n_big).to_u64().unwrap();
            BigInt::from(n / g)
        } else {
            BigInt::zero()
        }
    });
    for d in diag.iter().take(rows) {
        let g = d.gcd(&n_big).to_u64().unwrap();
        mu *= BigUint::from(n / g);
    }
    let widened = IntMatrix::hstack(&divided, &y);
    let m_old = sys.num_vars();
    let k = rows / t;
    let mut var_spans = sys.var_spans.clone();
    for j in 0..k {
        var_spans.push((sys.matrix.cols() + j * t, t));
    }
    let system = HomSystem::new(
        widened,
        sys.rhs.clone(),
        sys.row_moduli.clone(),
        [sys.col_orders.clone(), vec![n; rows]].concat(),
        var_spans,
        sys.eq_spans.clone(),
    )?;
    let affines = (0..m_old)
        .map(|_| AffineMap::identity(&vec![n; t]))
        .collect();
    Ok(StageOut {
        system,
        map: EquivalenceMap {
            sigma: (0..m_old).collect(),
            affines,
            mu,
            kind: MapKind::MuAuto,
        },
        notes: vec![format!("attached {} simulating variables", k)],
    })
}

/// Extends the divided matrix to a determinant-one square, then rewrites the
/// system in identity-headed form `(I | B)`. The identity columns are the
/// original variables; the map drops the extension variables.
pub fn determinantal_to_identity(sys: &HomSystem) -> Result<StageOut> {
    let (t, n) = sys
        .uniform_block()
        .ok_or_else(|| Error::Precondition("identity form needs a uniform system".into()))?;
    let rows = sys.matrix.rows();
    let k = rows / t;
    let m3 = sys.num_vars();
    let m = m3 - k;
    let tm = m * t;
    if tm < rows {
        return Err(Error::Precondition(
            "need at least as many retained variables as equations".into(),
        ));
    }
    let all_rows: Vec<usize> = (0..rows).collect();
    let head_cols: Vec<usize> = (0..tm).collect();
    let tail_cols: Vec<usize> = (tm..sys.matrix.cols()).collect();
    let a2 = sys.matrix.submatrix(&all_rows, &head_cols);
    let y = sys.matrix.submatrix(&all_rows, &tail_cols);
    if a2.determinantal_divisor(rows)? != BigInt::one() {
        return Err(Error::Precondition(
            "top determinantal must be one before the identity form".into(),
        ));
    }
    let n_sq = extend_to_det(&a2)?;
    let n_inv = n_sq.unimodular_inverse()?;
    let inv_cols: Vec<usize> = (0..tm).collect();
    let z_cols: Vec<usize> = (rows..tm).collect();
    let head_rows: Vec<usize> = (0..tm).collect();
    let b_z = n_inv.submatrix(&head_rows, &z_cols);
    let first_cols: Vec<usize> = (0..rows).collect();
    let b_y = n_inv.submatrix(&head_rows, &first_cols).mul(&y);
    let _ = inv_cols;
    let a5 = IntMatrix::hstack(&IntMatrix::identity(tm), &IntMatrix::hstack(&b_z, &b_y));
    let m5 = m + (m - k) + k;
    let system = HomSystem::new(
        a5,
        vec![0; tm],
        vec![n; tm],
        vec![n; m5 * t],
        (0..m5).map(|i| (i * t, t)).collect(),
        (0..m).map(|j| (j * t, t)).collect(),
    )?;
    // Original variables keep their places; the simulating variables sit
    // after the extension variables.
    let mut sigma: Vec<usize> = (0..m).collect();
    sigma.extend((0..k).map(|j| m + (m - k) + j));
    let affines = (0..m3).map(|_| AffineMap::identity(&vec![n; t])).collect();
    Ok(StageOut {
        system,
        map: EquivalenceMap {
            sigma,
            affines,
            mu: BigUint::one(),
            kind: MapKind::OneAuto,
        },
        notes: vec![format!("extended to a {}x{} determinant-one square", tm, tm)],
    })
}

/// Row-reduces each block of the tail matrix so row gcds equal the block's
/// diagonal invariants; the head identity is restored by twisting the map
/// with the inverse unimodular factors. Returns the divisor grid.
pub fn block_row_reduce(sys: &HomSystem) -> Result<(StageOut, Vec<Vec<BigInt>>)> {
    let (t, n) = sys
        .uniform_block()
        .ok_or_else(|| Error::Precondition("block reduction needs a uniform system".into()))?;
    let head = sys
        .identity_head()
        .ok_or_else(|| Error::Precondition("block reduction expects an identity head".into()))?;
    let m = head / t;
    let all_rows: Vec<usize> = (0..sys.matrix.rows()).collect();
    let tail_cols: Vec<usize> = (head..sys.matrix.cols()).collect();
    let b = sys.matrix.submatrix(&all_rows, &tail_cols);
    let mut notes = Vec::new();
    let mut reduced_blocks = Vec::with_capacity(m);
    let mut inverse_twists = Vec::with_capacity(m);
    let mut divisors = Vec::with_capacity(m);
    for i in 0..m {
        let rows_i: Vec<usize> = (i * t..(i + 1) * t).collect();
        let cols_i: Vec<usize> = (0..b.cols()).collect();
        let mut block = b.submatrix(&rows_i, &cols_i);
        if block.determinantal_divisor(t.min(block.cols()))?.is_zero() {
            let mut e = 1u32;
            loop {
                let step = BigInt::from(n).pow(e);
                let mut candidate = block.clone();
                for r in 0..t.min(block.cols()) {
                    let v = candidate.get(r, r) + &step;
                    candidate.set(r, r, v);
                }
                if !candidate
                    .determinantal_divisor(t.min(block.cols()))?
                    .is_zero()
                {
                    notes.push(format!(
                        "block {}: zero determinantal repaired with {}^{}",
                        i, n, e
                    ));
                    block = candidate;
                    break;
                }
                e += 1;
            }
        }
        let snf = smith_normal_form(&block);
        let (b1, u) = row_reduce_to_gcd_rows(&block)?;
        reduced_blocks.push(b1);
        inverse_twists.push(u.unimodular_inverse()?);
        divisors.push(snf.diag.clone());
    }
    let b1 = reduced_blocks
        .into_iter()
        .reduce(|acc, next| IntMatrix::vstack(&acc, &next))
        .unwrap();
    let a6 = IntMatrix::hstack(&IntMatrix::identity(head), &b1);
    let system = HomSystem::new(
        a6,
        sys.rhs.clone(),
        sys.row_moduli.clone(),
        sys.col_orders.clone(),
        sys.var_spans.clone(),
        sys.eq_spans.clone(),
    )?;
    let m5 = sys.num_vars();
    let affines: Vec<AffineMap> = (0..m5)
        .map(|i| {
            if i < m {
                AffineMap {
                    matrix: inverse_twists[i].clone(),
                    shift: vec![0; t],
                    target_orders: vec![n; t],
                }
            } else {
                AffineMap::identity(&vec![n; t])
            }
        })
        .collect();
    Ok((
        StageOut {
            system,
            map: EquivalenceMap {
                sigma: (0..m5).collect(),
                affines,
                mu: BigUint::one(),
                kind: MapKind::OneAuto,
            },
            notes,
        },
        divisors,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteAbelianGroup, DEFAULT_ENUM_CAP};
    use crate::pipeline::{verify_equivalence, VerifyOptions};

    fn scalar_sys(rows: &[Vec<i64>], n: u64) -> HomSystem {
        let g = FiniteAbelianGroup::normalize(&[n]).unwrap();
        let m = IntMatrix::from_i64_rows(rows);
        HomSystem::scalar(&m, &g, &vec![g.zero(); rows.len()]).unwrap()
    }

    fn assert_stage(out: &StageOut, prev: &HomSystem) {
        let report = verify_equivalence(
            &out.map,
            prev,
            &out.system,
            &VerifyOptions::default(),
        )
        .unwrap();
        assert!(report.all_pass(), "stage failed: {:?}", report);
    }

    #[test]
    fn dehomogenize_picks_least_particular_solution() {
        let g = FiniteAbelianGroup::normalize(&[2]).unwrap();
        let m = IntMatrix::from_i64_rows(&[vec![1, 1]]);
        let sys = HomSystem::scalar(&m, &g, &[g.element(&[1]).unwrap()]).unwrap();
        match dehomogenize(&sys, DEFAULT_ENUM_CAP).unwrap() {
            Dehomogenized::Shifted(out) => {
                // Lexicographically least solution of x1 + x2 = 1 is (0, 1).
                assert_eq!(out.map.affines[0].shift, vec![0]);
                assert_eq!(out.map.affines[1].shift, vec![1]);
                assert_stage(&out, &sys);
            }
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn dehomogenize_flags_empty_solution_sets() {
        let g = FiniteAbelianGroup::normalize(&[4]).unwrap();
        let m = IntMatrix::from_i64_rows(&[vec![2]]);
        let sys = HomSystem::scalar(&m, &g, &[g.element(&[1]).unwrap()]).unwrap();
        assert!(matches!(
            dehomogenize(&sys, DEFAULT_ENUM_CAP).unwrap(),
            Dehomogenized::NoSolution
        ));
    }

    #[test]
    fn lift_is_identity_on_homocyclic() {
        let sys = scalar_sys(&[vec![1, 1, 1]], 6);
        let out = lift_to_homocyclic(&sys).unwrap();
        assert_eq!(out.system, sys);
        assert!(out.map.mu.is_one());
    }

    #[test]
    fn lift_fiber_census() {
        let g = FiniteAbelianGroup::normalize(&[4, 2]).unwrap();
        let m = IntMatrix::from_i64_rows(&[vec![1, 1, 1]]);
        let sys = HomSystem::scalar(&m, &g, &[g.zero()]).unwrap();
        let out = lift_to_homocyclic(&sys).unwrap();
        assert_eq!(out.map.mu, BigUint::from(8u32)); // beta^3 = 2^3
        assert_stage(&out, &sys);

        // The projection ratio |G| / |S_i| is preserved under the lift.
        let sols1 = sys.enumerate_solutions(None, DEFAULT_ENUM_CAP).unwrap();
        let sols2 = out
            .system
            .enumerate_solutions(None, DEFAULT_ENUM_CAP)
            .unwrap();
        for i in 0..3 {
            let p1 = crate::system::project_solutions(&sys, &sols1, i).unwrap().len() as u64;
            let p2 = crate::system::project_solutions(&out.system, &sols2, i)
                .unwrap()
                .len() as u64;
            assert_eq!(8 / p1, 16 / p2);
        }
    }

    #[test]
    fn simulate_worked_case() {
        // (2 2 2) over Z4 becomes (1 1 1 | 2) with multiplicity 2.
        let sys = scalar_sys(&[vec![2, 2, 2]], 4);
        let (rr, diag) = row_reduce_stage(&sys).unwrap();
        assert_stage(&rr, &sys);
        let out = simulate_independent_vectors(&rr.system, &diag).unwrap();
        assert_eq!(out.map.mu, BigUint::from(2u32));
        assert_stage(&out, &rr.system);
        let c_prev = rr
            .system
            .enumerate_solutions(None, DEFAULT_ENUM_CAP)
            .unwrap()
            .count();
        let c_next = out
            .system
            .enumerate_solutions(None, DEFAULT_ENUM_CAP)
            .unwrap()
            .count();
        assert_eq!((c_prev, c_next), (32, 64));
        // The widened matrix is (1 1 1 2) up to row sign.
        let vals: Vec<i64> = (0..4)
            .map(|c| {
                out.system
                    .matrix
                    .get(0, c)
                    .to_i64()
                    .unwrap()
                    .rem_euclid(4)
            })
            .collect();
        assert_eq!(vals, vec![1, 1, 1, 2]);
    }

    #[test]
    fn simulate_coprime_rows_get_zero_acting_columns() {
        let sys = scalar_sys(&[vec![1, 1, 1]], 5);
        let (rr, diag) = row_reduce_stage(&sys).unwrap();
        let out = simulate_independent_vectors(&rr.system, &diag).unwrap();
        // d = 1: the new column coefficient is n itself, acting as zero.
        assert_eq!(out.map.mu, BigUint::from(5u32));
        assert_stage(&out, &rr.system);
    }

    #[test]
    fn identity_form_preserves_counts() {
        for (rows, n) in [
            (vec![vec![1i64, 1, 1]], 5u64),
            (vec![vec![2, 2, 2]], 4),
        ] {
            let sys = scalar_sys(&rows, n);
            let (rr, diag) = row_reduce_stage(&sys).unwrap();
            let sim = simulate_independent_vectors(&rr.system, &diag).unwrap();
            let out = determinantal_to_identity(&sim.system).unwrap();
            assert!(out.system.identity_head().is_some());
            assert_stage(&out, &sim.system);
            let before = sim
                .system
                .enumerate_solutions(None, DEFAULT_ENUM_CAP)
                .unwrap()
                .count();
            let after = out
                .system
                .enumerate_solutions(None, DEFAULT_ENUM_CAP)
                .unwrap()
                .count();
            assert_eq!(before, after);
        }
    }

    #[test]
    fn block_row_reduce_normalizes_gcds() {
        let sys = scalar_sys(&[vec![2, 2, 2]], 4);
        let (rr, diag) = row_reduce_stage(&sys).unwrap();
        let sim = simulate_independent_vectors(&rr.system, &diag).unwrap();
        let idf = determinantal_to_identity(&sim.system).unwrap();
        let (out, divisors) = block_row_reduce(&idf.system).unwrap();
        assert_stage(&out, &idf.system);
        // Row gcds of the reduced tail equal the divisor grid.
        let head = out.system.identity_head().unwrap();
        for (i, d_row) in divisors.iter().enumerate() {
            for (j, d) in d_row.iter().enumerate() {
                let r = i * d_row.len() + j;
                let g = (head..out.system.matrix.cols())
                    .map(|c| out.system.matrix.get(r, c).clone())
                    .fold(BigInt::zero(), |acc, x| acc.gcd(&x));
                assert_eq!(&g, d);
            }
        }
    }

    #[test]
    fn reduce_equations_drops_redundant_rows() {
        let sys = scalar_sys(&[vec![1, 1], vec![2, 2], vec![3, 3]], 6);
        let out = reduce_equations(&sys).unwrap().unwrap();
        assert!(out.system.matrix.rows() <= 2);
        let before = sys.enumerate_solutions(None, DEFAULT_ENUM_CAP).unwrap();
        let after = out
            .system
            .enumerate_solutions(None, DEFAULT_ENUM_CAP)
            .unwrap();
        assert_eq!(before.tuples, after.tuples);
    }

    #[test]
    fn pad_only_when_needed() {
        let sys = scalar_sys(&[vec![1, 1]], 3);
        let out = pad_stage(&sys).unwrap().unwrap();
        assert_eq!(out.system.num_vars(), 4);
        assert_eq!(out.map.mu, BigUint::from(9u32));
        assert_stage(&out, &sys);

        let sys = scalar_sys(&[vec![1, 1, 1]], 3);
        assert!(pad_stage(&sys).unwrap().is_none());
    }
}
