//! Circular matrices: stacked extensions whose sliding row windows all have
//! determinant coprime to the modulus, and the banded right-annihilator
//! used to label hypergraph edges.

use super::IntMatrix;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

fn coprime(a: &BigInt, n: &BigInt) -> bool {
    a.gcd(n).is_one()
}

/// True iff every `rows/block` consecutive column blocks of `a` (cyclically)
/// form a square matrix with determinant coprime to `n`.
pub fn is_block_n_circular(a: &IntMatrix, block: usize, n: u64) -> Result<bool> {
    if block == 0 || a.rows() % block != 0 || a.cols() % block != 0 {
        return Err(Error::DimensionMismatch(format!(
            "block size {} must divide both dimensions of {}x{}",
            block,
            a.rows(),
            a.cols()
        )));
    }
    let k = a.rows() / block;
    let m = a.cols() / block;
    if k > m {
        return Err(Error::DimensionMismatch(format!(
            "{} column blocks cannot host windows of {} blocks",
            m, k
        )));
    }
    let n_big = BigInt::from(n);
    let r = a.rows();
    // With an identity head, Laplace expansion along the unit columns of a
    // window leaves the complementary minor of the tail columns; the sign
    // is irrelevant for coprimality.
    let identity_head = (0..r).all(|i| {
        (0..r).all(|j| {
            let e = a.get(i, j);
            if i == j {
                e.is_one()
            } else {
                e.is_zero()
            }
        })
    });
    let all_rows: Vec<usize> = (0..r).collect();
    for start in 0..m {
        let mut cols = Vec::with_capacity(k * block);
        for u in 0..k {
            let b = (start + u) % m;
            for s in 0..block {
                cols.push(b * block + s);
            }
        }
        let det = if identity_head {
            let tail_cols: Vec<usize> = cols.iter().copied().filter(|&c| c >= r).collect();
            let mut dead = vec![false; r];
            for &c in &cols {
                if c < r {
                    dead[c] = true;
                }
            }
            let kept_rows: Vec<usize> = (0..r).filter(|&x| !dead[x]).collect();
            debug_assert_eq!(kept_rows.len(), tail_cols.len());
            a.submatrix(&kept_rows, &tail_cols).det()
        } else {
            a.submatrix(&all_rows, &cols).det()
        };
        if !coprime(&det, &n_big) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Builds the triangular completion rows for one side of the stack: row `i`
/// is an integer combination of the remaining work rows whose leading
/// coefficient is coprime to `n` and whose `i`-th entry is the column gcd.
fn triangular_completion(m: &IntMatrix, n: u64) -> Result<IntMatrix> {
    let r = m.rows();
    let n_big = BigInt::from(n);
    let mut work: Vec<Vec<BigInt>> = (0..r).map(|i| m.row(i).to_vec()).collect();
    let mut t_rows: Vec<Vec<BigInt>> = Vec::with_capacity(r);

    for i in 0..r {
        let col: Vec<BigInt> = (i..r).map(|j| work[j][i].clone()).collect();
        let d = col.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if d.is_zero() {
            return Err(Error::Precondition(
                "trailing minor collapsed during completion; input not invertible".into(),
            ));
        }
        if !coprime(&d, &n_big) {
            return Err(Error::Precondition(format!(
                "column gcd {} shares a factor with {}",
                d, n
            )));
        }
        let lambdas = bezout_with_coprime_lead(&col, &d, &n_big)?;
        let mut t_row = vec![BigInt::zero(); r];
        for (idx, lam) in lambdas.iter().enumerate() {
            if lam.is_zero() {
                continue;
            }
            for c in 0..r {
                t_row[c] += lam * &work[i + idx][c];
            }
        }
        debug_assert_eq!(t_row[i], d);
        debug_assert!(t_row[..i].iter().all(|x| x.is_zero()));
        // Zero out column i of the remaining work rows.
        for j in i + 1..r {
            let q = &work[j][i] / &d;
            if q.is_zero() {
                continue;
            }
            for c in 0..r {
                let sub = &q * &t_row[c];
                work[j][c] -= sub;
            }
        }
        t_rows.push(t_row);
    }
    IntMatrix::from_rows(t_rows)
}

/// Coefficients `lambda` with `sum lambda_j * col_j = d` and the leading
/// coefficient coprime to `n`. The lead solves `x * col_0 = d` modulo the
/// tail gcd; scanning one residue class finds a lead coprime to `n` within
/// `n` steps because the column gcd itself is coprime to `n`.
fn bezout_with_coprime_lead(col: &[BigInt], d: &BigInt, n: &BigInt) -> Result<Vec<BigInt>> {
    let tail_gcd = col[1..].iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let lead = &col[0];
    let finish = |x: BigInt| -> Result<Vec<BigInt>> {
        let rest = d - &x * lead;
        let mut out = vec![BigInt::zero(); col.len()];
        out[0] = x;
        if !rest.is_zero() {
            if tail_gcd.is_zero() || !(&rest % &tail_gcd).is_zero() {
                return Err(Error::Precondition(
                    "leading coefficient does not close the combination".into(),
                ));
            }
            let scale = &rest / &tail_gcd;
            let tail = bezout_chain(&col[1..]);
            for (o, t) in out[1..].iter_mut().zip(tail) {
                *o = t * &scale;
            }
        }
        Ok(out)
    };
    if tail_gcd.is_zero() {
        // Single effective row: the lead is forced up to sign.
        if lead.is_zero() {
            return Err(Error::Precondition("zero column in completion".into()));
        }
        let x = d / lead;
        if !coprime(&x, n) {
            return Err(Error::Precondition(
                "forced leading coefficient shares a factor with the modulus".into(),
            ));
        }
        return finish(x);
    }
    // Solve x * lead = d (mod tail_gcd): d is the gcd of lead and tail_gcd,
    // so the class exists; its period is tail_gcd / d.
    let period = &tail_gcd / d;
    let x0 = if period.is_one() {
        BigInt::zero()
    } else {
        let e = (lead / d).extended_gcd(&period);
        // e.x * (lead/d) = 1 (mod period), up to the unit e.gcd = 1.
        debug_assert!(e.gcd.is_one());
        e.x.mod_floor(&period)
    };
    // Within n consecutive steps of the class there is a lead coprime to n.
    let mut s = BigInt::zero();
    loop {
        for candidate in [&x0 + &s * &period, &x0 - &s * &period] {
            if coprime(&candidate, n) {
                return finish(candidate);
            }
        }
        s += 1;
        if s > n + BigInt::from(2) {
            return Err(Error::Precondition(
                "no coprime leading coefficient in the residue class".into(),
            ));
        }
    }
}

/// Coefficients expressing gcd(values) as an integer combination.
fn bezout_chain(values: &[BigInt]) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::zero(); values.len()];
    let mut g = BigInt::zero();
    for (i, v) in values.iter().enumerate() {
        if g.is_zero() {
            if v.is_zero() {
                continue;
            }
            g = v.abs();
            coeffs[i] = if v.is_negative() {
                -BigInt::one()
            } else {
                BigInt::one()
            };
            continue;
        }
        let e = g.extended_gcd(v);
        // e.gcd = e.x * g + e.y * v
        for c in coeffs.iter_mut() {
            *c *= &e.x;
        }
        coeffs[i] = e.y.clone();
        g = e.gcd;
    }
    coeffs
}

/// Stacks `[I; S; M; T; I]` so that every `r` consecutive rows have
/// determinant coprime to `n`. Requires `gcd(det M, n) = 1`.
pub fn circular_extension(m: &IntMatrix, n: u64) -> Result<IntMatrix> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch(format!(
            "extension input must be square, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if n < 2 {
        return Err(Error::Precondition("modulus must be at least 2".into()));
    }
    let n_big = BigInt::from(n);
    let det = m.det();
    if !coprime(&det, &n_big) {
        return Err(Error::Precondition(format!(
            "det {} shares a factor with {}",
            det, n
        )));
    }
    let r = m.rows();
    let t = triangular_completion(m, n)?;
    let reversed = IntMatrix::from_fn(r, r, |i, j| m.get(r - 1 - i, r - 1 - j).clone());
    let t_rev = triangular_completion(&reversed, n)?;
    let s = IntMatrix::from_fn(r, r, |i, j| t_rev.get(r - 1 - i, r - 1 - j).clone());

    let id = IntMatrix::identity(r);
    let stacked = [&id, &s, m, &t, &id]
        .into_iter()
        .cloned()
        .reduce(|acc, next| IntMatrix::vstack(&acc, &next))
        .unwrap();

    // Window validation is cheap at this size and the postcondition is the
    // whole point of the construction.
    for start in 0..=4 * r {
        let rows: Vec<usize> = (start..start + r).collect();
        let cols: Vec<usize> = (0..r).collect();
        let d = stacked.submatrix(&rows, &cols).det();
        if !coprime(&d, &n_big) {
            return Err(Error::Precondition(format!(
                "window at row {} has determinant {} not coprime to {}",
                start, d, n
            )));
        }
    }
    Ok(stacked)
}

/// Banded integer right-annihilator of a block circular matrix: `A * C = 0`,
/// block `(i, j)` of `C` vanishes outside the cyclic band `j in [i, i+k]`,
/// and the band-edge blocks have determinant coprime to `n`.
pub fn build_band_annihilator(a: &IntMatrix, block: usize, n: u64) -> Result<IntMatrix> {
    if !is_block_n_circular(a, block, n)? {
        return Err(Error::Precondition(
            "matrix is not block circular for the given modulus".into(),
        ));
    }
    let k = a.rows() / block;
    let m = a.cols() / block;
    if m <= k {
        return Err(Error::Precondition(format!(
            "need more column blocks than row blocks, got {} and {}",
            m, k
        )));
    }
    let kt = k * block;
    let mt = m * block;
    let all_rows: Vec<usize> = (0..a.rows()).collect();
    let mut c = IntMatrix::zero(mt, mt);

    for i in 0..m {
        // Express each column of block i+k through the window [i, i+k-1].
        let mut window_cols = Vec::with_capacity(kt);
        for u in 0..k {
            let b = (i + u) % m;
            for s in 0..block {
                window_cols.push(b * block + s);
            }
        }
        let w = a.submatrix(&all_rows, &window_cols);
        let target_block = (i + k) % m;
        for j in 0..block {
            let v = target_block * block + j;
            let col: Vec<BigInt> = (0..a.rows()).map(|r| a.get(r, v).clone()).collect();
            let (nums, den) = w.cramer_solve(&col)?;
            let nums_gcd = nums.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            let cdiag = if nums_gcd.is_zero() {
                BigInt::one()
            } else {
                let g = den.abs().gcd(&nums_gcd);
                den.abs() / g
            };
            debug_assert!(coprime(&cdiag, &BigInt::from(n)));
            c.set(v, v, cdiag.clone());
            for (w_idx, num) in nums.iter().enumerate() {
                if num.is_zero() {
                    continue;
                }
                let row = window_cols[w_idx];
                let coeff = -(&cdiag * num) / &den;
                c.set(row, v, coeff);
            }
        }
    }

    // Defining property, checked unconditionally.
    if !a.mul(&c).is_zero() {
        return Err(Error::Precondition(
            "annihilator construction failed to cancel the matrix".into(),
        ));
    }
    Ok(c)
}

/// Checks the three contract properties of a band annihilator, for tests
/// and the verification CLI: exact cancellation, cyclic band support, and
/// coprimality of the two band-edge block determinants.
pub fn check_band_annihilator(a: &IntMatrix, c: &IntMatrix, block: usize, n: u64) -> Result<()> {
    let k = a.rows() / block;
    let m = a.cols() / block;
    if !a.mul(c).is_zero() {
        return Err(Error::Precondition("A*C is not zero".into()));
    }
    let n_big = BigInt::from(n);
    for bi in 0..m {
        for bj in 0..m {
            let dist = (bj + m - bi) % m;
            let in_band = dist <= k;
            let rows: Vec<usize> = (bi * block..(bi + 1) * block).collect();
            let cols: Vec<usize> = (bj * block..(bj + 1) * block).collect();
            let blk = c.submatrix(&rows, &cols);
            if !in_band && !blk.is_zero() {
                return Err(Error::Precondition(format!(
                    "block ({}, {}) outside the band is nonzero",
                    bi, bj
                )));
            }
            if dist == 0 || dist == k {
                let det = blk.det();
                if !coprime(&det, &n_big) {
                    return Err(Error::Precondition(format!(
                        "band-edge block ({}, {}) has determinant {} not coprime to {}",
                        bi, bj, det, n
                    )));
                }
            }
        }
    }
    Ok(())
}
