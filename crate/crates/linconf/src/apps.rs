//! Corner configurations and homothetic patterns: building the systems
//! whose solutions are the multidimensional-progression configurations,
//! with double-counted censuses over dense subsets.

use crate::error::{Error, Result};
use crate::group::{increment_mixed_radix, FiniteAbelianGroup};
use crate::matrix::IntMatrix;
use crate::rng::SplitMix64;
use crate::system::{subgroup_closure, subgroup_to_system, HomSystem, VarDomain};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeSet;

/// A counted configuration family: how many solutions of the system land
/// entirely inside the chosen subset, against the unrestricted total.
#[derive(Debug, Clone)]
pub struct ConfigurationCensus {
    pub hits: u64,
    pub total: u64,
    /// The same count through the restricted solution enumeration; the two
    /// routes must agree exactly.
    pub hits_by_enumeration: u64,
}

/// The corner system over `P = G^m`: `m + 1` points, the first the corner,
/// each other one shifted by the same difference along one axis. Trivial
/// rows pad the equation count to `m` full blocks.
pub fn build_corner_system(group: &FiniteAbelianGroup, m: usize) -> Result<HomSystem> {
    if m == 0 {
        return Err(Error::Precondition("need at least one axis".into()));
    }
    let r = group.rank();
    let orders = group.orders();
    let width = m * r; // scalar slots per point
    let vars = m + 1;
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut moduli: Vec<u64> = Vec::new();
    let slot = |var: usize, comp: usize, coord: usize| var * width + comp * r + coord;

    // Difference equations: the axis-j shift equals the axis-1 shift.
    for j in 1..m {
        for c in 0..r {
            let mut row = vec![BigInt::zero(); vars * width];
            row[slot(0, 0, c)] = BigInt::from(1);
            row[slot(1, 0, c)] = BigInt::from(-1);
            row[slot(0, j, c)] = row[slot(0, j, c)].clone() + BigInt::from(-1);
            row[slot(j + 1, j, c)] = row[slot(j + 1, j, c)].clone() + BigInt::from(1);
            rows.push(row);
            moduli.push(orders[c]);
        }
    }
    // Agreement equations: away from its own axis every point matches the corner.
    for j in 0..m {
        for i in 1..vars {
            if i == j + 1 {
                continue;
            }
            for c in 0..r {
                let mut row = vec![BigInt::zero(); vars * width];
                row[slot(0, j, c)] = BigInt::from(1);
                row[slot(i, j, c)] = BigInt::from(-1);
                rows.push(row);
                moduli.push(orders[c]);
            }
        }
    }
    // Pad with trivial rows up to m full equation blocks.
    while rows.len() < m * width {
        rows.push(vec![BigInt::zero(); vars * width]);
        moduli.push(orders[0]);
    }
    let k_rows = rows.len();
    let matrix = IntMatrix::from_rows(rows)?;
    let col_orders: Vec<u64> = (0..vars * width).map(|c| orders[c % r]).collect();
    HomSystem::new(
        matrix,
        vec![0; k_rows],
        moduli,
        col_orders,
        (0..vars).map(|i| (i * width, width)).collect(),
        (0..m).map(|j| (j * width, width)).collect(),
    )
}

/// Counts corner configurations inside `subset` two independent ways:
/// a direct scan over the corner and difference, and the restricted
/// solution enumeration of the system.
pub fn count_corners(
    sys: &HomSystem,
    group: &FiniteAbelianGroup,
    m: usize,
    subset: &VarDomain,
    cap: u64,
) -> Result<ConfigurationCensus> {
    let r = group.rank();
    let orders = group.orders();
    let width = m * r;
    let point_orders: Vec<u64> = (0..width).map(|c| orders[c % r]).collect();

    let mut hits = 0u64;
    let mut total = 0u64;
    let mut x = vec![0u64; width];
    loop {
        let mut a = vec![0u64; r];
        loop {
            total += 1;
            let mut inside = subset.contains(&x);
            if inside {
                for j in 0..m {
                    let mut point = x.clone();
                    for c in 0..r {
                        point[j * r + c] = (point[j * r + c] + a[c]) % orders[c];
                    }
                    if !subset.contains(&point) {
                        inside = false;
                        break;
                    }
                }
            }
            if inside {
                hits += 1;
            }
            if !increment_mixed_radix(&mut a, orders) {
                break;
            }
        }
        if !increment_mixed_radix(&mut x, &point_orders) {
            break;
        }
    }

    let domains = vec![subset.clone(); sys.num_vars()];
    let hits_by_enumeration = sys.enumerate_solutions(Some(&domains), cap)?.count() as u64;
    Ok(ConfigurationCensus {
        hits,
        total,
        hits_by_enumeration,
    })
}

/// Homothetic configuration system: solutions are the tuples
/// `(x + phi_1(xs), ..., x + phi_t(xs))` with `x` in the group and `xs`
/// ranging over the given subgroups. Built by enumerating the configuration
/// subgroup and converting it back to equations.
pub fn build_homothetic_system(
    group: &FiniteAbelianGroup,
    subgroup_gens: &[Vec<Vec<u64>>],
    phis: &[IntMatrix],
    cap: u64,
) -> Result<HomSystem> {
    let r = group.rank();
    let t = phis.len();
    if t == 0 {
        return Err(Error::Precondition("need at least one point map".into()));
    }
    let s = subgroup_gens.len();
    let arg_width = s * r;
    for phi in phis {
        if phi.rows() != r || phi.cols() != arg_width {
            return Err(Error::DimensionMismatch(format!(
                "point maps must be {} x {}",
                r, arg_width
            )));
        }
        for row in 0..r {
            for col in 0..arg_width {
                let coef = phi.get(row, col);
                if coef.is_zero() {
                    continue;
                }
                let prod = coef * BigInt::from(group.orders()[col % r]);
                if !(&prod % BigInt::from(group.orders()[row])).is_zero() {
                    return Err(Error::Precondition(format!(
                        "map entry ({}, {}) is not a homomorphism",
                        row, col
                    )));
                }
            }
        }
    }

    // Enumerate each subgroup, then the configuration set.
    let mut subgroups = Vec::with_capacity(s);
    for gens in subgroup_gens {
        subgroups.push(subgroup_closure(group.orders(), gens, cap)?);
    }
    let lists: Vec<Vec<Vec<u64>>> = subgroups
        .iter()
        .map(|g| g.iter().cloned().collect())
        .collect();
    let mut config: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut x = vec![0u64; r];
    loop {
        let mut idx = vec![0usize; s];
        loop {
            let mut args = Vec::with_capacity(arg_width);
            for (j, list) in lists.iter().enumerate() {
                args.extend_from_slice(&list[idx[j]]);
            }
            let mut tuple = Vec::with_capacity(t * r);
            for phi in phis {
                for row in 0..r {
                    let modulus = group.orders()[row] as u128;
                    let mut acc = x[row] as u128 % modulus;
                    for col in 0..arg_width {
                        let coef = phi.get(row, col);
                        if coef.is_zero() {
                            continue;
                        }
                        let red = num_traits::ToPrimitive::to_u64(&num_integer::Integer::mod_floor(
                            coef,
                            &BigInt::from(group.orders()[row]),
                        ))
                        .unwrap() as u128;
                        acc = (acc + red * args[col] as u128) % modulus;
                    }
                    tuple.push(acc as u64);
                }
            }
            config.insert(tuple);
            if config.len() as u64 > cap {
                return Err(Error::CapExceeded {
                    needed: format!("> {}", cap),
                    cap,
                });
            }
            let mut pos = s;
            let advanced = loop {
                if pos == 0 {
                    break false;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < lists[pos].len() {
                    break true;
                }
                idx[pos] = 0;
            };
            if !advanced {
                break;
            }
        }
        if !increment_mixed_radix(&mut x, group.orders()) {
            break;
        }
    }

    // The configuration set is a subgroup of G^t; express it as a kernel.
    let gens: Vec<Vec<u64>> = config.iter().cloned().collect();
    let groups = vec![group.clone(); t];
    let zero = vec![0u64; t * r];
    subgroup_to_system(&groups, &gens, &zero, cap)
}

/// Deterministic pseudo-random subset of the point domain, for density
/// experiments with reproducible seeds.
pub fn sample_subset(slot_orders: &[u64], size: usize, seed: u64) -> VarDomain {
    let mut rng = SplitMix64::new(seed);
    let mut out = BTreeSet::new();
    let total: u64 = slot_orders.iter().product();
    let size = size.min(total as usize);
    while out.len() < size {
        let point: Vec<u64> = slot_orders.iter().map(|&o| rng.below(o)).collect();
        out.insert(point);
    }
    out
}
