//! Exact integer matrices. Everything here is arbitrary precision; the
//! reductions in this crate routinely produce intermediates that overflow
//! machine words even for tiny inputs.

mod circular;
mod snf;

pub use circular::{build_band_annihilator, check_band_annihilator, circular_extension, is_block_n_circular};
pub use snf::{
    divide_rows_by_gcd, extend_to_det, row_reduce_to_gcd_rows, smith_normal_form,
    SmithDecomposition,
};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, entries }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    /// Vertical stack.
    pub fn vstack(top: &IntMatrix, bottom: &IntMatrix) -> IntMatrix {
        assert_eq!(top.cols, bottom.cols);
        let mut m = IntMatrix::zero(top.rows + bottom.rows, top.cols);
        for r in 0..top.rows {
            for c in 0..top.cols {
                m.set(r, c, top.get(r, c).clone());
            }
        }
        for r in 0..bottom.rows {
            for c in 0..bottom.cols {
                m.set(top.rows + r, c, bottom.get(r, c).clone());
            }
        }
        m
    }

    /// Horizontal concatenation.
    pub fn hstack(left: &IntMatrix, right: &IntMatrix) -> IntMatrix {
        assert_eq!(left.rows, right.rows);
        IntMatrix::from_fn(left.rows, left.cols + right.cols, |i, j| {
            if j < left.cols {
                left.get(i, j).clone()
            } else {
                right.get(i, j - left.cols).clone()
            }
        })
    }

    pub fn submatrix(&self, row_ids: &[usize], col_ids: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(row_ids.len(), col_ids.len(), |i, j| {
            self.get(row_ids[i], col_ids[j]).clone()
        })
    }

    /// Swap two rows in place.
    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = self.get(dst, c) + q * self.get(src, c);
            self.set(dst, c, v);
        }
    }

    /// col[dst] += q * col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = self.get(r, dst) + q * self.get(r, src);
            self.set(r, dst, v);
        }
    }

    pub fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }

    /// Exact determinant. Peels off singleton columns, splits the rest into
    /// independent blocks by the nonzero pattern, and runs fraction-free
    /// elimination on each block. The sparse near-identity windows produced
    /// by the circular constructions collapse to tiny cores this way.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut sign = 1i8;
        let mut factor = BigInt::one();

        // Sparse adjacency for the singleton peel.
        let mut row_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut col_count = vec![0usize; n];
        for r in 0..n {
            for c in 0..n {
                if !self.get(r, c).is_zero() {
                    row_adj[r].push(c);
                    col_count[c] += 1;
                }
            }
        }
        let mut row_alive = vec![true; n];
        let mut col_alive = vec![true; n];
        let mut alive = n;
        let mut queue: Vec<usize> = (0..n).filter(|&c| col_count[c] <= 1).collect();
        while let Some(c) = queue.pop() {
            if !col_alive[c] {
                continue;
            }
            if col_count[c] == 0 {
                return BigInt::zero();
            }
            if col_count[c] != 1 {
                continue;
            }
            let r = (0..n)
                .find(|&r| row_alive[r] && !self.get(r, c).is_zero())
                .expect("counted nonzero row");
            // Laplace sign from positions inside the current live matrix.
            let ri = (0..r).filter(|&x| row_alive[x]).count();
            let cj = (0..c).filter(|&x| col_alive[x]).count();
            if (ri + cj) % 2 == 1 {
                sign = -sign;
            }
            let v = self.get(r, c);
            if v.is_negative() {
                sign = -sign;
            }
            factor *= v.abs();
            row_alive[r] = false;
            col_alive[c] = false;
            alive -= 1;
            for &c2 in &row_adj[r] {
                if col_alive[c2] {
                    col_count[c2] -= 1;
                    if col_count[c2] <= 1 {
                        queue.push(c2);
                    }
                }
            }
        }
        let live_rows: Vec<usize> = (0..n).filter(|&r| row_alive[r]).collect();
        let live_cols: Vec<usize> = (0..n).filter(|&c| col_alive[c]).collect();
        let _ = alive;
        if live_rows.is_empty() {
            let mut d = factor;
            if sign < 0 {
                d = -d;
            }
            return d;
        }

        // Partition the remaining core into connected components of the
        // row/column incidence graph; the determinant factors across them.
        let k = live_rows.len();
        if live_cols.len() != k {
            unreachable!("core must stay square");
        }
        let mut parent: Vec<usize> = (0..2 * k).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            let mut x = x;
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (ri, &r) in live_rows.iter().enumerate() {
            for (ci, &c) in live_cols.iter().enumerate() {
                if !self.get(r, c).is_zero() {
                    let a = find(&mut parent, ri);
                    let b = find(&mut parent, k + ci);
                    parent[a] = b;
                }
            }
        }
        let mut comp_rows: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        let mut comp_cols: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for ri in 0..k {
            let root = find(&mut parent, ri);
            comp_rows.entry(root).or_default().push(ri);
        }
        for ci in 0..k {
            let root = find(&mut parent, k + ci);
            comp_cols.entry(root).or_default().push(ci);
        }
        // A row with no nonzero entry forms its own component: zero matrix.
        for (root, rows) in &comp_rows {
            match comp_cols.get(root) {
                None => return BigInt::zero(),
                Some(cols) if cols.len() != rows.len() => return BigInt::zero(),
                _ => {}
            }
        }
        // Sign of the permutation that groups rows/cols by component.
        let mut row_order: Vec<usize> = Vec::with_capacity(k);
        let mut col_order: Vec<usize> = Vec::with_capacity(k);
        for (root, rows) in &comp_rows {
            row_order.extend(rows.iter().copied());
            col_order.extend(comp_cols[root].iter().copied());
        }
        sign *= permutation_sign(&row_order) * permutation_sign(&col_order);

        for (root, rows) in &comp_rows {
            let cols = &comp_cols[root];
            let sub_rows: Vec<usize> = rows.iter().map(|&ri| live_rows[ri]).collect();
            let sub_cols: Vec<usize> = cols.iter().map(|&ci| live_cols[ci]).collect();
            let block = self.submatrix(&sub_rows, &sub_cols);
            let d = bareiss_det(&block);
            if d.is_zero() {
                return BigInt::zero();
            }
            factor *= d;
        }
        if sign < 0 {
            factor = -factor;
        }
        factor
    }

    /// Inverse of a unimodular matrix (|det| = 1), exact.
    pub fn unimodular_inverse(&self) -> Result<IntMatrix> {
        let snf = smith_normal_form(self);
        if !snf.diag.iter().all(|d| d.is_one()) {
            return Err(Error::Precondition(
                "matrix is not unimodular; cannot invert over the integers".into(),
            ));
        }
        // U A V = I  =>  A^{-1} = V U
        Ok(snf.v.mul(&snf.u))
    }

    /// Solve `self * x = rhs` over the rationals via Cramer, returning the
    /// numerator vector and the common denominator `det(self)`.
    pub fn cramer_solve(&self, rhs: &[BigInt]) -> Result<(Vec<BigInt>, BigInt)> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(rhs.len(), self.rows);
        let d = self.det();
        if d.is_zero() {
            return Err(Error::RankDeficient("singular matrix in linear solve".into()));
        }
        let n = self.rows;
        let mut nums = Vec::with_capacity(n);
        for i in 0..n {
            let replaced = IntMatrix::from_fn(n, n, |r, c| {
                if c == i {
                    rhs[r].clone()
                } else {
                    self.get(r, c).clone()
                }
            });
            nums.push(replaced.det());
        }
        Ok((nums, d))
    }

    /// Greatest common divisor of all `i × i` minors, nonnegative, with the
    /// gcd-of-no-minors and all-zero conventions mapping to 0. This is the
    /// enumeration route; `determinantal_divisor` goes through the diagonal
    /// factorization and the two are cross-checked in tests.
    pub fn gcd_of_all_minors(&self, i: usize) -> Result<BigInt> {
        if i == 0 || i > self.rows.min(self.cols) {
            return Err(Error::IndexRange(format!(
                "minor order {} out of range for {}x{}",
                i, self.rows, self.cols
            )));
        }
        let mut g = BigInt::zero();
        let row_sets = combinations(self.rows, i);
        let col_sets = combinations(self.cols, i);
        for rs in &row_sets {
            for cs in &col_sets {
                let minor = self.submatrix(rs, cs).det();
                g = g.gcd(&minor);
                if g.is_one() {
                    return Ok(g);
                }
            }
        }
        Ok(g)
    }

    /// `i`-th determinantal divisor: the product of the first `i` diagonal
    /// invariants of the Smith form (equal to the gcd of all `i × i` minors).
    pub fn determinantal_divisor(&self, i: usize) -> Result<BigInt> {
        if i == 0 || i > self.rows.min(self.cols) {
            return Err(Error::IndexRange(format!(
                "determinantal order {} out of range for {}x{}",
                i, self.rows, self.cols
            )));
        }
        let snf = smith_normal_form(self);
        let mut prod = BigInt::one();
        for d in snf.diag.iter().take(i) {
            prod *= d;
        }
        Ok(prod)
    }
}

fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i8;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm.iter().position(|&p| p == x).unwrap();
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Fraction-free (Bareiss) determinant on a dense block.
fn bareiss_det(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|r| m.row(r).to_vec()).collect();
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = &num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let mut d = a[n - 1][n - 1].clone();
    if sign < 0 {
        d = -d;
    }
    d
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    #[test]
    fn det_small() {
        assert_eq!(m(&[vec![1, 2], vec![3, 4]]).det(), BigInt::from(-2));
        assert_eq!(m(&[vec![2, 0], vec![0, 3]]).det(), BigInt::from(6));
        assert_eq!(IntMatrix::identity(5).det(), BigInt::one());
        assert_eq!(IntMatrix::zero(3, 3).det(), BigInt::zero());
    }

    #[test]
    fn det_matches_cofactor_expansion_on_random() {
        fn cofactor_det(a: &IntMatrix) -> BigInt {
            let n = a.rows();
            if n == 0 {
                return BigInt::one();
            }
            if n == 1 {
                return a.get(0, 0).clone();
            }
            let mut acc = BigInt::zero();
            let cols: Vec<usize> = (1..n).collect();
            for r in 0..n {
                if a.get(r, 0).is_zero() {
                    continue;
                }
                let rows: Vec<usize> = (0..n).filter(|&x| x != r).collect();
                let minor = cofactor_det(&a.submatrix(&rows, &cols));
                let term = a.get(r, 0) * minor;
                if r % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        let mut rng = SplitMix64::new(11);
        for _ in 0..200 {
            let n = 1 + (rng.below(4) as usize);
            let a = IntMatrix::from_fn(n, n, |_, _| BigInt::from(rng.in_range(-4, 4)));
            assert_eq!(a.det(), cofactor_det(&a));
        }
    }

    #[test]
    fn det_peels_identity_heavy_windows() {
        // (I | b) window shape: unit columns plus a small core.
        let mut a = IntMatrix::identity(6);
        a.set(3, 4, BigInt::from(5));
        a.set(4, 3, BigInt::from(2));
        a.set(3, 3, BigInt::from(3));
        a.set(4, 4, BigInt::from(4));
        // rows 3,4 / cols 3,4 core: det [[3,5],[2,4]] = 2
        assert_eq!(a.det(), BigInt::from(2));
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let u = m(&[vec![1, 1, 0], vec![0, 1, 2], vec![0, 0, 1]]);
        let inv = u.unimodular_inverse().unwrap();
        assert_eq!(u.mul(&inv), IntMatrix::identity(3));
        assert_eq!(inv.mul(&u), IntMatrix::identity(3));
    }

    #[test]
    fn cramer_solves_exactly() {
        let a = m(&[vec![2, 1], vec![1, 3]]);
        let (nums, den) = a.cramer_solve(&[BigInt::from(5), BigInt::from(10)]).unwrap();
        // x = (1, 3), det = 5
        assert_eq!(den, BigInt::from(5));
        assert_eq!(nums, vec![BigInt::from(5), BigInt::from(15)]);
    }

    #[test]
    fn minor_gcd_conventions() {
        let z = IntMatrix::zero(2, 2);
        assert_eq!(z.gcd_of_all_minors(1).unwrap(), BigInt::zero());
        let a = m(&[vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(a.gcd_of_all_minors(2).unwrap(), BigInt::one());
        let b = m(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(b.gcd_of_all_minors(2).unwrap(), BigInt::from(4));
    }
}
