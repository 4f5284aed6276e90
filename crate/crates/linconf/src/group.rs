//! Finite abelian groups in invariant-factor form and their element
//! arithmetic. Everything is an immutable value; elements carry their group.

use crate::error::{Error, Result};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub coords: Vec<u64>,
    pub group: FiniteAbelianGroup,
}

impl FiniteAbelianGroup {
    /// Canonicalizes a product of cyclic groups into invariant factors
    /// (each order divides the previous one) by pairwise gcd/lcm merging.
    pub fn normalize(orders: &[u64]) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidGroup("no cyclic factors given".into()));
        }
        if let Some(&bad) = orders.iter().find(|&&o| o < 2) {
            return Err(Error::InvalidGroup(format!(
                "cyclic order {} is not allowed (must be >= 2)",
                bad
            )));
        }
        let mut v: Vec<u64> = orders.to_vec();
        loop {
            let mut changed = false;
            for i in 0..v.len() {
                for j in i + 1..v.len() {
                    if v[i] % v[j] != 0 {
                        let g = v[i].gcd(&v[j]);
                        let l = v[i] / g * v[j];
                        v[i] = l;
                        v[j] = g;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        v.retain(|&o| o > 1);
        if v.is_empty() {
            return Err(Error::InvalidGroup("group collapsed to the trivial group".into()));
        }
        Ok(FiniteAbelianGroup { orders: v })
    }

    /// Invariant factors, largest first.
    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.orders[0]
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.orders.len()],
            group: self.clone(),
        }
    }

    pub fn element(&self, coords: &[u64]) -> Result<GroupElement> {
        if coords.len() != self.orders.len() {
            return Err(Error::DimensionMismatch(format!(
                "element needs {} coordinates, got {}",
                self.orders.len(),
                coords.len()
            )));
        }
        let reduced = coords
            .iter()
            .zip(&self.orders)
            .map(|(&c, &n)| c % n)
            .collect();
        Ok(GroupElement {
            coords: reduced,
            group: self.clone(),
        })
    }

    /// All elements in lexicographic order. Errors when the group order
    /// exceeds the cap; never truncates silently.
    pub fn enumerate(&self, cap: u64) -> Result<Vec<GroupElement>> {
        let total = self.order();
        if total > cap {
            return Err(Error::CapExceeded {
                needed: total.to_string(),
                cap,
            });
        }
        let mut out = Vec::with_capacity(total as usize);
        let mut coords = vec![0u64; self.orders.len()];
        loop {
            out.push(GroupElement {
                coords: coords.clone(),
                group: self.clone(),
            });
            if !increment_mixed_radix(&mut coords, &self.orders) {
                break;
            }
        }
        Ok(out)
    }

    /// Elements `x` with `d * x = 0`, sorted lexicographically. The kernel of
    /// multiplication by `d` in coordinate `i` consists of the multiples of
    /// `n_i / gcd(d, n_i)`.
    pub fn kernel_of_mult(&self, d: u64) -> Vec<GroupElement> {
        let per_coord: Vec<Vec<u64>> = self
            .orders
            .iter()
            .map(|&n| {
                let g = d.gcd(&n);
                let step = n / g;
                (0..g).map(|i| i * step).collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; per_coord.len()];
        loop {
            out.push(GroupElement {
                coords: idx.iter().zip(&per_coord).map(|(&i, vals)| vals[i]).collect(),
                group: self.clone(),
            });
            let mut pos = per_coord.len();
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < per_coord[pos].len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }

    /// Homocyclic cover: `Z_{n_1}^t` together with the coordinatewise
    /// reduction onto this group and the fiber size `beta`.
    pub fn quotient_lift(&self) -> QuotientLift {
        let n1 = self.orders[0];
        let t = self.orders.len();
        let source = FiniteAbelianGroup {
            orders: vec![n1; t],
        };
        let beta = source.order() / self.order();
        QuotientLift {
            source,
            target: self.clone(),
            beta,
        }
    }
}

/// The canonical surjection from the homocyclic cover: coordinatewise
/// reduction modulo the invariant factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientLift {
    pub source: FiniteAbelianGroup,
    pub target: FiniteAbelianGroup,
    pub beta: u64,
}

impl QuotientLift {
    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        if x.group != self.source {
            return Err(Error::GroupMismatch);
        }
        self.target.element(&x.coords)
    }
}

impl GroupElement {
    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .zip(self.group.orders())
            .map(|((&a, &b), &n)| (a + b) % n)
            .collect();
        Ok(GroupElement {
            coords,
            group: self.group.clone(),
        })
    }

    pub fn neg(&self) -> GroupElement {
        let coords = self
            .coords
            .iter()
            .zip(self.group.orders())
            .map(|(&a, &n)| (n - a % n) % n)
            .collect();
        GroupElement {
            coords,
            group: self.group.clone(),
        }
    }

    /// `c * x` with any signed integer `c`, via modular reduction.
    pub fn scalar_mul(&self, c: i64) -> GroupElement {
        let coords = self
            .coords
            .iter()
            .zip(self.group.orders())
            .map(|(&a, &n)| {
                let cm = c.rem_euclid(n as i64) as u64;
                (cm * (a % n)) % n
            })
            .collect();
        GroupElement {
            coords,
            group: self.group.clone(),
        }
    }

    /// Additive order of the element.
    pub fn element_order(&self) -> u64 {
        self.coords
            .iter()
            .zip(self.group.orders())
            .map(|(&a, &n)| {
                if a == 0 {
                    1
                } else {
                    n / a.gcd(&n)
                }
            })
            .fold(1u64, |acc, o| acc.lcm(&o))
    }
}

pub fn increment_mixed_radix(coords: &mut [u64], radices: &[u64]) -> bool {
    let mut pos = coords.len();
    loop {
        if pos == 0 {
            return false;
        }
        pos -= 1;
        coords[pos] += 1;
        if coords[pos] < radices[pos] {
            return true;
        }
        coords[pos] = 0;
    }
}
