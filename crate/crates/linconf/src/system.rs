//! Linear configuration systems: an exact integer matrix acting on tuples
//! of residues, one modulus per scalar row. Variables may span several
//! scalar slots (block structure / product groups). Two independent
//! enumeration routes are kept: a full scan filtered through `is_solution`
//! and a free-variable parameterization for identity-headed systems; they
//! are cross-checked in tests and any disagreement is a hard failure.

use crate::error::{Error, Result};
use crate::group::{increment_mixed_radix, FiniteAbelianGroup, GroupElement};
use crate::matrix::IntMatrix;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};

pub type VarDomain = BTreeSet<Vec<u64>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSystem {
    pub matrix: IntMatrix,
    /// Residue target per scalar row, already reduced modulo `row_moduli`.
    pub rhs: Vec<u64>,
    /// Modulus of each scalar equation.
    pub row_moduli: Vec<u64>,
    /// Order of each scalar variable slot (1 = frozen slot).
    pub col_orders: Vec<u64>,
    /// Scalar column ranges of the logical variables.
    pub var_spans: Vec<(usize, usize)>,
    /// Scalar row ranges of the logical equations.
    pub eq_spans: Vec<(usize, usize)>,
    /// Construction repairs applied (entries congruent to zero swapped in).
    pub repair_log: Vec<String>,
}

impl HomSystem {
    pub fn new(
        matrix: IntMatrix,
        rhs: Vec<u64>,
        row_moduli: Vec<u64>,
        col_orders: Vec<u64>,
        var_spans: Vec<(usize, usize)>,
        eq_spans: Vec<(usize, usize)>,
    ) -> Result<Self> {
        if matrix.rows() != row_moduli.len() || matrix.rows() != rhs.len() {
            return Err(Error::DimensionMismatch(
                "row count, moduli, and right-hand side must agree".into(),
            ));
        }
        if matrix.cols() != col_orders.len() {
            return Err(Error::DimensionMismatch(
                "column count and slot orders must agree".into(),
            ));
        }
        if row_moduli.iter().any(|&m| m == 0) || col_orders.iter().any(|&o| o == 0) {
            return Err(Error::InvalidInput("moduli and orders must be positive".into()));
        }
        let mut expect = 0usize;
        for &(s, l) in &var_spans {
            if s != expect || l == 0 {
                return Err(Error::DimensionMismatch(
                    "variable spans must tile the columns".into(),
                ));
            }
            expect = s + l;
        }
        if expect != matrix.cols() {
            return Err(Error::DimensionMismatch(
                "variable spans must tile the columns".into(),
            ));
        }
        expect = 0;
        for &(s, l) in &eq_spans {
            if s != expect || l == 0 {
                return Err(Error::DimensionMismatch(
                    "equation spans must tile the rows".into(),
                ));
            }
            expect = s + l;
        }
        if expect != matrix.rows() {
            return Err(Error::DimensionMismatch(
                "equation spans must tile the rows".into(),
            ));
        }
        for (r, (&modulus, &target)) in row_moduli.iter().zip(&rhs).enumerate() {
            if target >= modulus {
                return Err(Error::InvalidInput(format!(
                    "rhs residue {} not reduced modulo {} in row {}",
                    target, modulus, r
                )));
            }
            for c in 0..matrix.cols() {
                let coef = matrix.get(r, c);
                if coef.is_zero() {
                    continue;
                }
                let prod = coef * BigInt::from(col_orders[c]);
                if !(&prod % BigInt::from(modulus)).is_zero() {
                    return Err(Error::InvalidInput(format!(
                        "entry at ({}, {}) does not define a homomorphism into Z_{}",
                        r, c, modulus
                    )));
                }
            }
        }
        Ok(HomSystem {
            matrix,
            rhs,
            row_moduli,
            col_orders,
            var_spans,
            eq_spans,
            repair_log: Vec::new(),
        })
    }

    /// A `k x m` integer matrix acting coordinatewise on elements of `group`:
    /// every scalar coefficient is expanded to a diagonal block.
    pub fn scalar(
        matrix: &IntMatrix,
        group: &FiniteAbelianGroup,
        rhs: &[GroupElement],
    ) -> Result<Self> {
        let k = matrix.rows();
        let m = matrix.cols();
        if rhs.len() != k {
            return Err(Error::DimensionMismatch(format!(
                "need {} right-hand elements, got {}",
                k,
                rhs.len()
            )));
        }
        for b in rhs {
            if &b.group != group {
                return Err(Error::GroupMismatch);
            }
        }
        let w = group.rank();
        let orders = group.orders();
        let big = IntMatrix::from_fn(k * w, m * w, |r, c| {
            if r % w == c % w {
                matrix.get(r / w, c / w).clone()
            } else {
                BigInt::zero()
            }
        });
        let mut rhs_flat = Vec::with_capacity(k * w);
        let mut row_moduli = Vec::with_capacity(k * w);
        let mut col_orders = Vec::with_capacity(m * w);
        for b in rhs {
            for (s, &o) in orders.iter().enumerate() {
                rhs_flat.push(b.coords[s] % o);
                row_moduli.push(o);
            }
        }
        for _ in 0..m {
            col_orders.extend_from_slice(orders);
        }
        HomSystem::new(
            big,
            rhs_flat,
            row_moduli,
            col_orders,
            (0..m).map(|i| (i * w, w)).collect(),
            (0..k).map(|j| (j * w, w)).collect(),
        )
    }

    /// Assembles a block system over a homocyclic group from a `k x m` grid
    /// of `t x t` integer blocks. Zero columns and a singular leading square
    /// are repaired with entries congruent to zero, and the repairs logged.
    pub fn from_blocks(
        blocks: &[Vec<IntMatrix>],
        group: &FiniteAbelianGroup,
        rhs: &[Vec<u64>],
    ) -> Result<Self> {
        let t = group.rank();
        let n = group.exponent();
        if group.orders().iter().any(|&o| o != n) {
            return Err(Error::Precondition(
                "block assembly needs a homocyclic group".into(),
            ));
        }
        let k = blocks.len();
        if k == 0 {
            return Err(Error::DimensionMismatch("no equation blocks".into()));
        }
        let m = blocks[0].len();
        if blocks.iter().any(|row| row.len() != m)
            || blocks
                .iter()
                .flatten()
                .any(|b| b.rows() != t || b.cols() != t)
        {
            return Err(Error::DimensionMismatch(format!(
                "expected a {}x{} grid of {}x{} blocks",
                k, m, t, t
            )));
        }
        if rhs.len() != k || rhs.iter().any(|b| b.len() != t) {
            return Err(Error::DimensionMismatch(
                "right-hand side must list one block element per equation".into(),
            ));
        }
        let mut matrix = IntMatrix::from_fn(k * t, m * t, |r, c| {
            blocks[r / t][c / t].get(r % t, c % t).clone()
        });
        let mut repair_log = Vec::new();

        // Zero columns get a single entry equal to the exponent.
        for c in 0..matrix.cols() {
            if (0..matrix.rows()).all(|r| matrix.get(r, c).is_zero()) {
                let r = c % matrix.rows();
                matrix.set(r, c, BigInt::from(n));
                repair_log.push(format!(
                    "zero column {} repaired with entry {} at row {}",
                    c, n, r
                ));
            }
        }
        // Singular leading square repaired by the smallest power of the
        // exponent added along the diagonal.
        if matrix.rows() <= matrix.cols() {
            let rr = matrix.rows();
            let ids: Vec<usize> = (0..rr).collect();
            if matrix.submatrix(&ids, &ids).det().is_zero() {
                let mut e = 1u32;
                loop {
                    let step = BigInt::from(n).pow(e);
                    let mut candidate = matrix.clone();
                    for r in 0..rr {
                        let v = candidate.get(r, r) + &step;
                        candidate.set(r, r, v);
                    }
                    if !candidate.submatrix(&ids, &ids).det().is_zero() {
                        matrix = candidate;
                        repair_log.push(format!(
                            "singular leading square repaired by adding {}^{} to the diagonal",
                            n, e
                        ));
                        break;
                    }
                    e += 1;
                }
            }
        }
        let mut sys = HomSystem::new(
            matrix,
            rhs.iter().flat_map(|b| b.iter().map(|&x| x % n)).collect(),
            vec![n; k * t],
            vec![n; m * t],
            (0..m).map(|i| (i * t, t)).collect(),
            (0..k).map(|j| (j * t, t)).collect(),
        )?;
        sys.repair_log = repair_log;
        Ok(sys)
    }

    pub fn num_vars(&self) -> usize {
        self.var_spans.len()
    }

    pub fn num_eqs(&self) -> usize {
        self.eq_spans.len()
    }

    pub fn var_slice<'a>(&self, solution: &'a [u64], i: usize) -> &'a [u64] {
        let (s, l) = self.var_spans[i];
        &solution[s..s + l]
    }

    pub fn rhs_is_zero(&self) -> bool {
        self.rhs.iter().all(|&b| b == 0)
    }

    /// Uniform structure: every variable `t` wide, every slot and row
    /// modulus equal to one `n`. The reduction pipeline lives here.
    pub fn uniform_block(&self) -> Option<(usize, u64)> {
        let (_, t) = *self.var_spans.first()?;
        if self.var_spans.iter().any(|&(_, l)| l != t) {
            return None;
        }
        if self.eq_spans.iter().any(|&(_, l)| l != t) {
            return None;
        }
        let n = *self.col_orders.first()?;
        if self.col_orders.iter().any(|&o| o != n) || self.row_moduli.iter().any(|&m| m != n) {
            return None;
        }
        Some((t, n))
    }

    /// Number of distinct values one variable ranges over.
    pub fn domain_size(&self, i: usize) -> BigUint {
        let (s, l) = self.var_spans[i];
        self.col_orders[s..s + l]
            .iter()
            .map(|&o| BigUint::from(o))
            .product()
    }

    pub fn total_assignments(&self) -> BigUint {
        self.col_orders.iter().map(|&o| BigUint::from(o)).product()
    }

    pub(crate) fn reduced_rows(&self) -> Vec<ReducedRow> {
        (0..self.matrix.rows())
            .map(|r| {
                let modulus = self.row_moduli[r];
                let mut terms = Vec::new();
                for c in 0..self.matrix.cols() {
                    let coef = self.matrix.get(r, c);
                    if coef.is_zero() {
                        continue;
                    }
                    let red = coef.mod_floor(&BigInt::from(modulus)).to_u64().unwrap();
                    if red != 0 {
                        terms.push((c, red));
                    }
                }
                ReducedRow {
                    modulus,
                    rhs: self.rhs[r] % modulus,
                    terms,
                }
            })
            .collect()
    }

    /// Re-evaluation route: substitutes the tuple into every equation.
    pub fn is_solution(&self, x: &[u64]) -> bool {
        if x.len() != self.matrix.cols() {
            return false;
        }
        if x.iter().zip(&self.col_orders).any(|(&v, &o)| v >= o) {
            return false;
        }
        for r in 0..self.matrix.rows() {
            let modulus = self.row_moduli[r] as u128;
            let mut acc: u128 = 0;
            for c in 0..self.matrix.cols() {
                let coef = self.matrix.get(r, c);
                if coef.is_zero() {
                    continue;
                }
                let red = coef
                    .mod_floor(&BigInt::from(self.row_moduli[r]))
                    .to_u64()
                    .unwrap() as u128;
                acc = (acc + red * x[c] as u128) % modulus;
            }
            if acc as u64 != self.rhs[r] % self.row_moduli[r] {
                return false;
            }
        }
        true
    }

    /// Identity-headed shape `(I | B)`: the first `r` columns form an exact
    /// integer identity aligned with whole variables and matching moduli.
    pub fn identity_head(&self) -> Option<usize> {
        let r = self.matrix.rows();
        if r > self.matrix.cols() {
            return None;
        }
        for i in 0..r {
            for j in 0..r {
                let e = self.matrix.get(i, j);
                if i == j {
                    if !e.is_one() {
                        return None;
                    }
                } else if !e.is_zero() {
                    return None;
                }
            }
            if self.col_orders[i] != self.row_moduli[i] {
                return None;
            }
        }
        if r != self.matrix.cols() && !self.var_spans.iter().any(|&(s, _)| s == r) {
            return None;
        }
        Some(r)
    }

    /// Streaming iterator over all solutions. Ordering is lexicographic for
    /// the full scan and tail-major for the parameterized route; callers
    /// that need lexicographic output sort afterwards.
    pub fn iter_solutions(&self, cap: u64) -> Result<SolutionIter<'_>> {
        let rows = self.reduced_rows();
        if let Some(head) = self.identity_head() {
            let needed: BigUint = self.col_orders[head..]
                .iter()
                .map(|&o| BigUint::from(o))
                .product();
            if needed > BigUint::from(cap) {
                return Err(Error::CapExceeded {
                    needed: needed.to_string(),
                    cap,
                });
            }
            return Ok(SolutionIter {
                sys: self,
                rows,
                head: Some(head),
                state: vec![0; self.matrix.cols() - head],
                started: false,
                done: false,
            });
        }
        let needed = self.total_assignments();
        if needed > BigUint::from(cap) {
            return Err(Error::CapExceeded {
                needed: needed.to_string(),
                cap,
            });
        }
        Ok(SolutionIter {
            sys: self,
            rows,
            head: None,
            state: vec![0; self.matrix.cols()],
            started: false,
            done: false,
        })
    }

    /// Exact solution set in lexicographic order, optionally restricted to
    /// per-variable domains.
    pub fn enumerate_solutions(
        &self,
        domains: Option<&[VarDomain]>,
        cap: u64,
    ) -> Result<SolutionSet> {
        if let Some(doms) = domains {
            if doms.len() != self.num_vars() {
                return Err(Error::DimensionMismatch(format!(
                    "need {} domains, got {}",
                    self.num_vars(),
                    doms.len()
                )));
            }
        }
        let mut tuples = Vec::new();
        for sol in self.iter_solutions(cap)? {
            if let Some(doms) = domains {
                let ok =
                    (0..self.num_vars()).all(|i| doms[i].contains(self.var_slice(&sol, i)));
                if !ok {
                    continue;
                }
            }
            tuples.push(sol);
        }
        tuples.sort();
        tuples.dedup();
        Ok(SolutionSet {
            tuples,
            restricted: domains.map(|d| d.to_vec()),
        })
    }

    /// Reference oracle: plain scan of every assignment through the
    /// substitution check, ignoring any identity head.
    pub fn enumerate_solutions_full_scan(
        &self,
        domains: Option<&[VarDomain]>,
        cap: u64,
    ) -> Result<SolutionSet> {
        let needed = self.total_assignments();
        if needed > BigUint::from(cap) {
            return Err(Error::CapExceeded {
                needed: needed.to_string(),
                cap,
            });
        }
        let mut tuples = Vec::new();
        let mut x = vec![0u64; self.matrix.cols()];
        loop {
            if self.is_solution(&x) {
                let ok = match domains {
                    None => true,
                    Some(doms) => {
                        (0..self.num_vars()).all(|i| doms[i].contains(self.var_slice(&x, i)))
                    }
                };
                if ok {
                    tuples.push(x.clone());
                }
            }
            if !increment_mixed_radix(&mut x, &self.col_orders) {
                break;
            }
        }
        Ok(SolutionSet {
            tuples,
            restricted: domains.map(|d| d.to_vec()),
        })
    }

    /// Exact count; closed form on homogeneous identity-headed systems.
    pub fn count_solutions(&self, cap: u64) -> Result<BigUint> {
        if let Some(head) = self.identity_head() {
            return Ok(self.col_orders[head..]
                .iter()
                .map(|&o| BigUint::from(o))
                .product());
        }
        let mut count = BigUint::zero();
        for _ in self.iter_solutions(cap)? {
            count += 1u32;
        }
        Ok(count)
    }

    /// Appends two variables whose coefficients all equal the order of the
    /// variable group, i.e. columns acting as zero.
    pub fn pad_variables(&self) -> Result<HomSystem> {
        let (_, w) = *self.var_spans.first().ok_or_else(|| {
            Error::DimensionMismatch("cannot pad a system without variables".into())
        })?;
        let first_orders = self.col_orders[..w].to_vec();
        for &(s, l) in &self.var_spans {
            if l != w || self.col_orders[s..s + l] != first_orders[..] {
                return Err(Error::Precondition(
                    "padding needs identically shaped variables".into(),
                ));
            }
        }
        let g: u64 = first_orders.iter().product();
        let old_cols = self.matrix.cols();
        let ext = IntMatrix::from_fn(self.matrix.rows(), old_cols + 2 * w, |r, c| {
            if c < old_cols {
                self.matrix.get(r, c).clone()
            } else {
                BigInt::from(g)
            }
        });
        let mut col_orders = self.col_orders.clone();
        col_orders.extend_from_slice(&first_orders);
        col_orders.extend_from_slice(&first_orders);
        let mut var_spans = self.var_spans.clone();
        var_spans.push((old_cols, w));
        var_spans.push((old_cols + w, w));
        let mut sys = HomSystem::new(
            ext,
            self.rhs.clone(),
            self.row_moduli.clone(),
            col_orders,
            var_spans,
            self.eq_spans.clone(),
        )?;
        sys.repair_log = self.repair_log.clone();
        Ok(sys)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct ReducedRow {
    pub(crate) modulus: u64,
    pub(crate) rhs: u64,
    pub(crate) terms: Vec<(usize, u64)>,
}

pub struct SolutionIter<'a> {
    sys: &'a HomSystem,
    rows: Vec<ReducedRow>,
    head: Option<usize>,
    state: Vec<u64>,
    started: bool,
    done: bool,
}

impl Iterator for SolutionIter<'_> {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        match self.head {
            Some(head) => {
                let radices = &self.sys.col_orders[head..];
                if self.started {
                    if !increment_mixed_radix(&mut self.state, radices) {
                        self.done = true;
                        return None;
                    }
                } else {
                    self.started = true;
                }
                let mut full = vec![0u64; self.sys.matrix.cols()];
                full[head..].copy_from_slice(&self.state);
                for (r, row) in self.rows.iter().enumerate() {
                    let mut acc: u128 = 0;
                    for &(c, coef) in &row.terms {
                        if c < head {
                            continue;
                        }
                        acc = (acc + coef as u128 * full[c] as u128) % row.modulus as u128;
                    }
                    let value =
                        ((row.rhs as u128 + row.modulus as u128 - acc) % row.modulus as u128) as u64;
                    full[r] = value;
                }
                Some(full)
            }
            None => loop {
                if self.started {
                    if !increment_mixed_radix(&mut self.state, &self.sys.col_orders) {
                        self.done = true;
                        return None;
                    }
                } else {
                    self.started = true;
                }
                let good = self.rows.iter().all(|row| {
                    let mut acc: u128 = 0;
                    for &(c, coef) in &row.terms {
                        acc = (acc + coef as u128 * self.state[c] as u128) % row.modulus as u128;
                    }
                    acc as u64 == row.rhs
                });
                if good {
                    return Some(self.state.clone());
                }
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub tuples: Vec<Vec<u64>>,
    pub restricted: Option<Vec<VarDomain>>,
}

impl SolutionSet {
    pub fn count(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn as_set(&self) -> BTreeSet<Vec<u64>> {
        self.tuples.iter().cloned().collect()
    }
}

/// Deduplicated sorted projection of the solution set onto variable `i`.
pub fn project_solutions(sys: &HomSystem, sol: &SolutionSet, i: usize) -> Result<Vec<Vec<u64>>> {
    if i >= sys.num_vars() {
        return Err(Error::IndexRange(format!(
            "variable {} of {}",
            i,
            sys.num_vars()
        )));
    }
    let mut vals: Vec<Vec<u64>> = sol
        .tuples
        .iter()
        .map(|t| sys.var_slice(t, i).to_vec())
        .collect();
    vals.sort();
    vals.dedup();
    Ok(vals)
}

/// The full domain of variable `i` as an explicit set.
pub fn full_domain(sys: &HomSystem, i: usize) -> VarDomain {
    let (s, l) = sys.var_spans[i];
    let radices = &sys.col_orders[s..s + l];
    let mut out = BTreeSet::new();
    let mut coords = vec![0u64; l];
    loop {
        out.insert(coords.clone());
        if !increment_mixed_radix(&mut coords, radices) {
            return out;
        }
    }
}

/// System whose solution set is the coset `shift + <generators>` inside the
/// product of the given groups: characters annihilating the subgroup become
/// the equations.
pub fn subgroup_to_system(
    groups: &[FiniteAbelianGroup],
    generators: &[Vec<u64>],
    shift: &[u64],
    cap: u64,
) -> Result<HomSystem> {
    if groups.is_empty() {
        return Err(Error::InvalidInput("need at least one variable group".into()));
    }
    let mut col_orders = Vec::new();
    let mut var_spans = Vec::new();
    for g in groups {
        var_spans.push((col_orders.len(), g.rank()));
        col_orders.extend_from_slice(g.orders());
    }
    let total_slots = col_orders.len();
    if shift.len() != total_slots || generators.iter().any(|g| g.len() != total_slots) {
        return Err(Error::DimensionMismatch(format!(
            "elements of the product group have {} coordinates",
            total_slots
        )));
    }
    let ambient: BigUint = col_orders.iter().map(|&o| BigUint::from(o)).product();
    if ambient > BigUint::from(cap) {
        return Err(Error::CapExceeded {
            needed: ambient.to_string(),
            cap,
        });
    }
    let n_lcm = col_orders.iter().fold(1u64, |acc, &o| acc.lcm(&o));
    let weights: Vec<u64> = col_orders.iter().map(|&o| n_lcm / o).collect();

    let mut annihilators: Vec<Vec<u64>> = Vec::new();
    let mut chi = vec![0u64; total_slots];
    loop {
        let kills_all = generators.iter().all(|g| {
            let mut acc: u128 = 0;
            for ((&c, &w), &x) in chi.iter().zip(&weights).zip(g) {
                acc = (acc + c as u128 * w as u128 % n_lcm as u128 * x as u128) % n_lcm as u128;
            }
            acc == 0
        });
        if kills_all {
            annihilators.push(chi.clone());
        }
        if !increment_mixed_radix(&mut chi, &col_orders) {
            break;
        }
    }
    if annihilators.len() > 1 {
        annihilators.retain(|c| c.iter().any(|&x| x != 0));
    }
    let rows = annihilators.len();
    let matrix = IntMatrix::from_fn(rows, total_slots, |r, c| {
        BigInt::from(annihilators[r][c] * weights[c])
    });
    let mut rhs = Vec::with_capacity(rows);
    for chi in &annihilators {
        let mut acc: u128 = 0;
        for ((&c, &w), &s) in chi.iter().zip(&weights).zip(shift) {
            acc = (acc + c as u128 * w as u128 % n_lcm as u128 * s as u128) % n_lcm as u128;
        }
        rhs.push(acc as u64);
    }
    HomSystem::new(
        matrix,
        rhs,
        vec![n_lcm; rows],
        col_orders,
        var_spans,
        (0..rows).map(|r| (r, 1)).collect(),
    )
}

/// Closure of a generating set inside the product group, by breadth-first
/// addition; used to cross-check `subgroup_to_system` by double enumeration.
pub fn subgroup_closure(
    col_orders: &[u64],
    generators: &[Vec<u64>],
    cap: u64,
) -> Result<BTreeSet<Vec<u64>>> {
    let mut set: BTreeSet<Vec<u64>> = BTreeSet::new();
    set.insert(vec![0; col_orders.len()]);
    let mut frontier: Vec<Vec<u64>> = vec![vec![0; col_orders.len()]];
    while let Some(x) = frontier.pop() {
        for g in generators {
            let sum: Vec<u64> = x
                .iter()
                .zip(g)
                .zip(col_orders)
                .map(|((&a, &b), &o)| (a + b) % o)
                .collect();
            if set.insert(sum.clone()) {
                if set.len() as u64 > cap {
                    return Err(Error::CapExceeded {
                        needed: format!("> {}", cap),
                        cap,
                    });
                }
                frontier.push(sum);
            }
        }
    }
    Ok(set)
}

/// Exhaustive check that every assignment of the leading (equation-count)
/// variables extends to exactly `n^(m-k)` solutions per variable slot; the
/// trailing block must have top determinantal coprime to `n`.
pub fn extension_count_check(sys: &HomSystem, n: u64, cap: u64) -> Result<bool> {
    let k = sys.num_eqs();
    let m_total = sys.num_vars();
    if k >= m_total {
        return Err(Error::Precondition(
            "the trailing block must contain at least one variable".into(),
        ));
    }
    let prefix_slots = sys.var_spans[k].0;
    let tail_cols: Vec<usize> = (prefix_slots..sys.matrix.cols()).collect();
    let all_rows: Vec<usize> = (0..sys.matrix.rows()).collect();
    let b_part = sys.matrix.submatrix(&all_rows, &tail_cols);
    let order = b_part.rows().min(b_part.cols());
    let dk = b_part.determinantal_divisor(order)?;
    if !dk.gcd(&BigInt::from(n)).is_one() {
        return Err(Error::Precondition(format!(
            "trailing determinantal {} shares a factor with {}",
            dk, n
        )));
    }
    let tail_free_slots = sys.matrix.cols() - prefix_slots - (sys.matrix.rows());
    let expected = BigUint::from(n).pow(tail_free_slots as u32);
    let mut counts: BTreeMap<Vec<u64>, BigUint> = BTreeMap::new();
    for sol in sys.enumerate_solutions_full_scan(None, cap)?.tuples {
        *counts
            .entry(sol[..prefix_slots].to_vec())
            .or_insert_with(BigUint::zero) += 1u32;
    }
    let prefix_total: BigUint = sys.col_orders[..prefix_slots]
        .iter()
        .map(|&o| BigUint::from(o))
        .product();
    if BigUint::from(counts.len() as u64) != prefix_total {
        return Ok(false);
    }
    Ok(counts.values().all(|c| *c == expected))
}
