//! Permutation patterns through bicolored tournaments: the copies of the
//! pattern digraph inside the text digraph are exactly the occurrences,
//! and the census is checked both ways.

use crate::error::{Error, Result};
use crate::hypergraph::{enumerate_copies, ColoredHypergraph};
use serde::{Deserialize, Serialize};

pub const BLUE: usize = 1;
pub const RED: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Permutation {
    pub values: Vec<usize>,
}

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let mut sorted = values.clone();
        sorted.sort_unstable();
        if sorted.iter().enumerate().any(|(i, &v)| i != v) {
            return Err(Error::InvalidInput(format!(
                "{:?} is not a bijection on 0..{}",
                values,
                values.len()
            )));
        }
        Ok(Permutation { values })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            values: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// One-line text form, space separated.
    pub fn parse(text: &str) -> Result<Self> {
        let values: Vec<usize> = text
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidInput(format!("bad index {:?}", t)))
            })
            .collect::<Result<_>>()?;
        Permutation::new(values)
    }
}

/// Loopless bicolored tournament of a permutation: an arc `i -> j` whenever
/// `sigma(i) < sigma(j)`, painted blue for ascents in position, red for
/// descents.
pub fn build_pattern_digraph(sigma: &Permutation) -> ColoredHypergraph {
    let n = sigma.len();
    let mut g = ColoredHypergraph::new(n, 2, true);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if sigma.values[i] < sigma.values[j] {
                let color = if i < j { BLUE } else { RED };
                g.add_edge(color, &[i, j], None).expect("valid arc");
            }
        }
    }
    g
}

/// All index sets where the pattern occurs, sorted: subsets
/// `x_0 < ... < x_{m-1}` with `sigma(x_i) < sigma(x_j)` iff `tau(i) < tau(j)`.
pub fn occurrences(tau: &Permutation, sigma: &Permutation) -> Result<Vec<Vec<usize>>> {
    let m = tau.len();
    let n = sigma.len();
    if m > n {
        return Err(Error::Precondition(format!(
            "pattern length {} exceeds text length {}",
            m, n
        )));
    }
    let mut out = Vec::new();
    let mut subset: Vec<usize> = (0..m).collect();
    loop {
        let matches = (0..m).all(|i| {
            (i + 1..m).all(|j| {
                (sigma.values[subset[i]] < sigma.values[subset[j]])
                    == (tau.values[i] < tau.values[j])
            })
        });
        if matches {
            out.push(subset.clone());
        }
        // Next m-combination of [0, n).
        let mut pos = m;
        let advanced = loop {
            if pos == 0 {
                break false;
            }
            pos -= 1;
            if subset[pos] < n - (m - pos) {
                subset[pos] += 1;
                for k in pos + 1..m {
                    subset[k] = subset[k - 1] + 1;
                }
                break true;
            }
        };
        if !advanced {
            break;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct PatternCensus {
    pub copies: Vec<Vec<usize>>,
    pub occurrences: Vec<Vec<usize>>,
    /// Every copy map is strictly increasing.
    pub all_monotone: bool,
    /// The copies, as index sets, are exactly the occurrences.
    pub sets_match: bool,
}

impl PatternCensus {
    pub fn consistent(&self) -> bool {
        self.all_monotone && self.sets_match && self.copies.len() == self.occurrences.len()
    }
}

/// Enumerates directed colored copies of the pattern digraph in the text
/// digraph and checks the bijection with the occurrence sets, including the
/// rigidity of the embedding (a copy can only be the monotone map).
pub fn copies_match_occurrences(
    tau: &Permutation,
    sigma: &Permutation,
    cap: u64,
) -> Result<PatternCensus> {
    let g_tau = build_pattern_digraph(tau);
    let g_sigma = build_pattern_digraph(sigma);
    let copies = enumerate_copies(&g_tau, &g_sigma, cap)?;
    let occ = occurrences(tau, sigma)?;
    let all_monotone = copies
        .iter()
        .all(|c| c.windows(2).all(|w| w[0] < w[1]));
    let copy_sets: std::collections::BTreeSet<Vec<usize>> = copies
        .iter()
        .map(|c| {
            let mut s = c.clone();
            s.sort_unstable();
            s
        })
        .collect();
    let occ_sets: std::collections::BTreeSet<Vec<usize>> = occ.iter().cloned().collect();
    let sets_match = copy_sets == occ_sets && copy_sets.len() == copies.len();
    Ok(PatternCensus {
        copies,
        occurrences: occ,
        all_monotone,
        sets_match,
    })
}
