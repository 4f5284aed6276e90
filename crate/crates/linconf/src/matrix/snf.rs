//! Smith normal form with unimodular witnesses, and the row reductions
//! built on top of it. Convention fixed throughout the crate: `U * A * V = S`
//! with `S` diagonal, nonnegative, and each diagonal entry dividing the next.

use super::IntMatrix;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub diag: Vec<BigInt>,
}

/// Full Smith normal form. `u` is rows x rows, `v` is cols x cols, both
/// unimodular, and `u * a * v == s` exactly.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let rows = a.rows();
    let cols = a.cols();
    let mut s = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let r = rows.min(cols);

    for t in 0..r {
        'pivot: loop {
            // Locate the minimal-magnitude nonzero entry in the working block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if s.get(i, j).is_zero() {
                        continue;
                    }
                    match best {
                        None => best = Some((i, j)),
                        Some((bi, bj)) => {
                            if s.get(i, j).abs() < s.get(bi, bj).abs() {
                                best = Some((i, j));
                            }
                        }
                    }
                }
            }
            let (pi, pj) = match best {
                None => break 'pivot,
                Some(p) => p,
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            // Clear column t below the pivot.
            let mut dirty = false;
            for i in t + 1..rows {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = div_nearest(s.get(i, t), s.get(t, t));
                let nq = -q;
                s.add_row_multiple(i, t, &nq);
                u.add_row_multiple(i, t, &nq);
                if !s.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            // Clear row t right of the pivot.
            for j in t + 1..cols {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = div_nearest(s.get(t, j), s.get(t, t));
                let nq = -q;
                s.add_col_multiple(j, t, &nq);
                v.add_col_multiple(j, t, &nq);
                if !s.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // Pivot must divide every remaining entry; otherwise absorb an
            // offending row and restart the reduction at this pivot.
            for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(s.get(i, j) % s.get(t, t)).is_zero() {
                        let one = BigInt::one();
                        s.add_row_multiple(t, i, &one);
                        u.add_row_multiple(t, i, &one);
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }

    let diag: Vec<BigInt> = (0..r).map(|i| s.get(i, i).clone()).collect();
    SmithDecomposition { u, s, v, diag }
}

/// Division rounding to nearest, so remainders stay at most half the divisor.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    let two_r = BigInt::from(2) * r.abs();
    if two_r > b.abs() {
        if (a.is_negative()) == (b.is_negative()) {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// Row reduction making the gcd of row `j` equal to the `j`-th Smith
/// diagonal entry: returns `(U * A, U)` with `U` unimodular.
pub fn row_reduce_to_gcd_rows(a: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    if a.rows() > a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "row reduction expects rows <= cols, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let snf = smith_normal_form(a);
    Ok((snf.u.mul(a), snf.u))
}

/// Divide row `j` of `a1` by `diag[j]` exactly.
pub fn divide_rows_by_gcd(a1: &IntMatrix, diag: &[BigInt]) -> Result<IntMatrix> {
    if diag.len() != a1.rows() {
        return Err(Error::DimensionMismatch(format!(
            "need one divisor per row: {} rows, {} divisors",
            a1.rows(),
            diag.len()
        )));
    }
    let mut out = IntMatrix::zero(a1.rows(), a1.cols());
    for r in 0..a1.rows() {
        let d = &diag[r];
        if d.is_zero() {
            return Err(Error::DegenerateSystem(format!(
                "row {} has zero gcd; the system needs repair before division",
                r
            )));
        }
        for c in 0..a1.cols() {
            let (q, rem) = a1.get(r, c).div_rem(d);
            if !rem.is_zero() {
                return Err(Error::Precondition(format!(
                    "divisor {} does not divide entry at ({}, {})",
                    d, r, c
                )));
            }
            out.set(r, c, q);
        }
    }
    Ok(out)
}

/// Extend a `k x m` matrix (`k <= m`, top determinantal nonzero) to an
/// `m x m` matrix containing it as the first `k` rows, with determinant
/// equal to the top determinantal divisor.
pub fn extend_to_det(a: &IntMatrix) -> Result<IntMatrix> {
    let k = a.rows();
    let m = a.cols();
    if k > m {
        return Err(Error::DimensionMismatch(format!(
            "cannot extend {}x{} with rows > cols",
            k, m
        )));
    }
    let snf = smith_normal_form(a);
    let dk: BigInt = snf.diag.iter().product();
    if dk.is_zero() {
        return Err(Error::RankDeficient(
            "top determinantal divisor is zero; no extension exists".into(),
        ));
    }
    if k == m {
        let d = a.det();
        if d == dk {
            return Ok(a.clone());
        }
        return Err(Error::Precondition(
            "square matrix with negative determinant admits no extension".into(),
        ));
    }
    // With U A V = (D | 0), the block matrix [[A], [last rows of V^{-1}]]
    // has determinant ±det(D).
    let v_inv = snf.v.unimodular_inverse()?;
    let bottom_rows: Vec<usize> = (k..m).collect();
    let all_cols: Vec<usize> = (0..m).collect();
    let mut bottom = v_inv.submatrix(&bottom_rows, &all_cols);
    let mut n = IntMatrix::vstack(a, &bottom);
    if n.det() != dk {
        bottom.negate_row(0);
        n = IntMatrix::vstack(a, &bottom);
    }
    debug_assert_eq!(n.det(), dk);
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use num_traits::One;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    fn check_witnesses(a: &IntMatrix) -> SmithDecomposition {
        let snf = smith_normal_form(a);
        assert_eq!(snf.u.mul(a).mul(&snf.v), snf.s, "U*A*V != S");
        assert!(snf.u.det().abs().is_one(), "U not unimodular");
        assert!(snf.v.det().abs().is_one(), "V not unimodular");
        for w in snf.diag.windows(2) {
            if w[0].is_zero() {
                assert!(w[1].is_zero(), "zero must trail the chain");
            } else {
                assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken");
            }
        }
        for d in &snf.diag {
            assert!(!d.is_negative());
        }
        snf
    }

    #[test]
    fn identity_is_fixed() {
        let snf = check_witnesses(&IntMatrix::identity(3));
        assert_eq!(snf.diag, vec![BigInt::one(); 3]);
    }

    #[test]
    fn known_diagonals() {
        let snf = check_witnesses(&m(&[vec![1, 2], vec![3, 4]]));
        assert_eq!(snf.diag, vec![BigInt::from(1), BigInt::from(2)]);
        let snf = check_witnesses(&m(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(snf.diag, vec![BigInt::from(2), BigInt::from(4)]);
        let snf = check_witnesses(&m(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(snf.diag, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn determinantal_matches_minor_gcd_on_random() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..150 {
            let r = 1 + rng.below(4) as usize;
            let c = 1 + rng.below(5) as usize;
            let a = IntMatrix::from_fn(r, c, |_, _| BigInt::from(rng.in_range(-5, 5)));
            for i in 1..=r.min(c) {
                assert_eq!(
                    a.determinantal_divisor(i).unwrap(),
                    a.gcd_of_all_minors(i).unwrap(),
                    "mismatch for order {} of {:?}",
                    i,
                    a
                );
            }
        }
    }

    #[test]
    fn row_reduction_exposes_row_gcds() {
        let (a1, u) = row_reduce_to_gcd_rows(&m(&[vec![2, 4, 6]])).unwrap();
        assert!(u.det().abs().is_one());
        let g = a1.row(0).iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        assert_eq!(g, BigInt::from(2));

        let (a1, _) = row_reduce_to_gcd_rows(&m(&[vec![1, 0, 0], vec![0, 1, 0]])).unwrap();
        for r in 0..2 {
            let g = a1.row(r).iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            assert_eq!(g, BigInt::one());
        }

        let (a1, _) = row_reduce_to_gcd_rows(&m(&[vec![2, 0], vec![0, 3]])).unwrap();
        let gcds: Vec<BigInt> = (0..2)
            .map(|r| a1.row(r).iter().fold(BigInt::zero(), |acc, x| acc.gcd(x)))
            .collect();
        assert_eq!(gcds, vec![BigInt::one(), BigInt::from(6)]);
    }

    #[test]
    fn divide_rows_reaches_determinantal_one() {
        let a = m(&[vec![2, 4, 6]]);
        let (a1, _) = row_reduce_to_gcd_rows(&a).unwrap();
        let snf = smith_normal_form(&a);
        let a2 = divide_rows_by_gcd(&a1, &snf.diag).unwrap();
        assert_eq!(a2.determinantal_divisor(1).unwrap(), BigInt::one());

        let b = m(&[vec![2, 2], vec![0, 3]]);
        let (b1, _) = row_reduce_to_gcd_rows(&b).unwrap();
        let snf = smith_normal_form(&b);
        let b2 = divide_rows_by_gcd(&b1, &snf.diag).unwrap();
        assert_eq!(b2.determinantal_divisor(2).unwrap(), BigInt::one());
    }

    #[test]
    fn divide_rows_rejects_zero_gcd() {
        let a = IntMatrix::zero(1, 3);
        let err = divide_rows_by_gcd(&a, &[BigInt::zero()]).unwrap_err();
        assert!(matches!(err, Error::DegenerateSystem(_)));
    }

    #[test]
    fn extension_examples() {
        let n = extend_to_det(&m(&[vec![1, 1]])).unwrap();
        assert_eq!(n.rows(), 2);
        assert_eq!(n.row(0), m(&[vec![1, 1]]).row(0));
        assert_eq!(n.det(), BigInt::one());

        let n = extend_to_det(&IntMatrix::identity(2)).unwrap();
        assert_eq!(n, IntMatrix::identity(2));

        let n = extend_to_det(&m(&[vec![2, 4]])).unwrap();
        assert_eq!(n.det(), BigInt::from(2));
    }

    #[test]
    fn extension_rejects_rank_deficient() {
        let err = extend_to_det(&IntMatrix::zero(1, 2)).unwrap_err();
        assert!(matches!(err, Error::RankDeficient(_)));
    }

    #[test]
    fn extension_on_random_matrices() {
        let mut rng = SplitMix64::new(17);
        let mut tried = 0;
        while tried < 60 {
            let k = 1 + rng.below(3) as usize;
            let m_ = k + rng.below(3) as usize;
            let a = IntMatrix::from_fn(k, m_, |_, _| BigInt::from(rng.in_range(-4, 4)));
            let dk = a.determinantal_divisor(k).unwrap();
            if dk.is_zero() {
                continue;
            }
            if k == m_ && a.det() != dk {
                continue;
            }
            tried += 1;
            let n = extend_to_det(&a).unwrap();
            for r in 0..k {
                assert_eq!(n.row(r), a.row(r));
            }
            assert_eq!(n.det(), dk);
        }
    }
}
