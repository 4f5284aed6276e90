//! Colored, labeled, optionally directed uniform hypergraphs and the
//! backtracking search for color-preserving injective copies.

mod removal;
mod rep;
mod transfer;

pub use removal::{greedy_edge_cover, removal_deletion, DeletionOutcome};
pub use rep::{
    build_cycle_template_h, build_k_from_circular, identity_representation, verify_rp_properties,
    RepresentationCertificate, RpMode, RpReport, SystemRef, TransferLayer,
};
pub use transfer::{transfer_1_auto, transfer_mu_auto, transfer_mu_equiv_1, transfer_mu_equiv_2};

use crate::error::{Error, Result};
use crate::system::VarDomain;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    /// 1-based color.
    pub color: usize,
    /// Sorted for undirected graphs, in orientation order for directed ones.
    pub verts: Vec<usize>,
    pub label: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredHypergraph {
    pub n_vertices: usize,
    pub uniformity: usize,
    pub directed: bool,
    /// Cluster index per vertex for partite graphs.
    pub clusters: Option<Vec<usize>>,
    pub edges: Vec<Edge>,
}

impl ColoredHypergraph {
    pub fn new(n_vertices: usize, uniformity: usize, directed: bool) -> Self {
        ColoredHypergraph {
            n_vertices,
            uniformity,
            directed,
            clusters: None,
            edges: Vec::new(),
        }
    }

    pub fn canonical_verts(&self, verts: &[usize]) -> Vec<usize> {
        let mut v = verts.to_vec();
        if !self.directed {
            v.sort_unstable();
        }
        v
    }

    pub fn add_edge(&mut self, color: usize, verts: &[usize], label: Option<Vec<u64>>) -> Result<()> {
        if verts.len() != self.uniformity {
            return Err(Error::DimensionMismatch(format!(
                "edge has {} vertices in a {}-uniform hypergraph",
                verts.len(),
                self.uniformity
            )));
        }
        if verts.iter().any(|&v| v >= self.n_vertices) {
            return Err(Error::IndexRange("edge vertex out of range".into()));
        }
        if color == 0 {
            return Err(Error::InvalidInput("colors are 1-based".into()));
        }
        let canonical = self.canonical_verts(verts);
        if !self.directed {
            let mut dedup = canonical.clone();
            dedup.dedup();
            if dedup.len() != canonical.len() {
                return Err(Error::InvalidInput("repeated vertex in edge".into()));
            }
        }
        self.edges.push(Edge {
            color,
            verts: canonical,
            label,
        });
        Ok(())
    }

    pub fn num_colors(&self) -> usize {
        self.edges.iter().map(|e| e.color).max().unwrap_or(0)
    }

    pub fn edges_of_color(&self, color: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.color == color)
    }

    /// Lookup table from (color, canonical vertex list) to edge index.
    pub fn edge_index(&self) -> HashMap<(usize, Vec<usize>), usize> {
        let mut map = HashMap::with_capacity(self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            map.insert((e.color, e.verts.clone()), i);
        }
        map
    }

    /// Copy with only the edges whose label lies in the domain of their
    /// color; edges without a label are dropped.
    pub fn restrict_by_labels(&self, domains: &[VarDomain]) -> ColoredHypergraph {
        let mut out = self.clone();
        out.edges = self
            .edges
            .iter()
            .filter(|e| {
                e.label
                    .as_ref()
                    .map_or(false, |l| {
                        e.color >= 1 && e.color <= domains.len() && domains[e.color - 1].contains(l)
                    })
            })
            .cloned()
            .collect();
        out
    }
}

/// All color-preserving injective homomorphisms of `h` into `k`, as vertex
/// maps, in lexicographic order of the assignment vector. Orientation is
/// respected when both graphs are directed.
pub fn enumerate_copies(
    h: &ColoredHypergraph,
    k: &ColoredHypergraph,
    cap: u64,
) -> Result<Vec<Vec<usize>>> {
    if h.directed != k.directed {
        return Err(Error::Precondition(
            "template and host must agree on orientation".into(),
        ));
    }
    if h.uniformity != k.uniformity {
        return Err(Error::Precondition(
            "template and host must agree on uniformity".into(),
        ));
    }
    let index = k.edge_index();
    // Edges of h grouped by the highest template vertex they touch, so each
    // edge is checked as soon as its last vertex is assigned.
    let mut ready_at: Vec<Vec<&Edge>> = vec![Vec::new(); h.n_vertices];
    for e in &h.edges {
        let last = *e.verts.iter().max().unwrap();
        ready_at[last].push(e);
    }
    let mut out = Vec::new();
    let mut assignment: Vec<usize> = Vec::with_capacity(h.n_vertices);
    let mut used = vec![false; k.n_vertices];
    let mut nodes: u64 = 0;

    fn candidates(h: &ColoredHypergraph, k: &ColoredHypergraph, v: usize) -> Vec<usize> {
        match (&h.clusters, &k.clusters) {
            (Some(hc), Some(kc)) => (0..k.n_vertices).filter(|&u| kc[u] == hc[v]).collect(),
            _ => (0..k.n_vertices).collect(),
        }
    }

    fn rec(
        h: &ColoredHypergraph,
        k: &ColoredHypergraph,
        index: &HashMap<(usize, Vec<usize>), usize>,
        ready_at: &[Vec<&Edge>],
        assignment: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
        nodes: &mut u64,
        cap: u64,
    ) -> Result<()> {
        let v = assignment.len();
        if v == h.n_vertices {
            out.push(assignment.clone());
            if out.len() as u64 > cap {
                return Err(Error::CapExceeded {
                    needed: format!("> {}", cap),
                    cap,
                });
            }
            return Ok(());
        }
        for u in candidates(h, k, v) {
            if used[u] {
                continue;
            }
            *nodes += 1;
            if *nodes > cap.saturating_mul(64) {
                return Err(Error::CapExceeded {
                    needed: format!("> {} search nodes", cap.saturating_mul(64)),
                    cap,
                });
            }
            assignment.push(u);
            used[u] = true;
            let ok = ready_at[v].iter().all(|e| {
                let mapped: Vec<usize> = e.verts.iter().map(|&x| assignment[x]).collect();
                let canonical = k.canonical_verts(&mapped);
                index.contains_key(&(e.color, canonical))
            });
            if ok {
                rec(h, k, index, ready_at, assignment, used, out, nodes, cap)?;
            }
            assignment.pop();
            used[u] = false;
        }
        Ok(())
    }

    rec(
        h,
        k,
        &index,
        &ready_at,
        &mut assignment,
        &mut used,
        &mut out,
        &mut nodes,
        cap,
    )?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn copies_of_a_triangle_in_a_colored_square() {
        // Host: 4-cycle with all three colors on every edge; template: the
        // colored triangle. No triangle exists in a 4-cycle.
        let mut h = ColoredHypergraph::new(3, 2, false);
        h.add_edge(1, &[0, 1], None).unwrap();
        h.add_edge(2, &[1, 2], None).unwrap();
        h.add_edge(3, &[2, 0], None).unwrap();
        let mut k = ColoredHypergraph::new(4, 2, false);
        for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
            for c in 1..=3 {
                k.add_edge(c, &[a, b], None).unwrap();
            }
        }
        assert!(enumerate_copies(&h, &k, 10_000).unwrap().is_empty());

        // Add one diagonal and triangles appear.
        for c in 1..=3 {
            k.add_edge(c, &[0, 2], None).unwrap();
        }
        let copies = enumerate_copies(&h, &k, 10_000).unwrap();
        assert!(!copies.is_empty());
        for copy in &copies {
            let mut sorted = copy.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), 3, "copies are injective");
        }
    }

    #[test]
    fn directed_edges_respect_orientation() {
        let mut h = ColoredHypergraph::new(2, 2, true);
        h.add_edge(1, &[0, 1], None).unwrap();
        let mut k = ColoredHypergraph::new(2, 2, true);
        k.add_edge(1, &[1, 0], None).unwrap();
        // Template arrow 0 -> 1, host arrow 1 -> 0: exactly one embedding.
        let copies = enumerate_copies(&h, &k, 100).unwrap();
        assert_eq!(copies, vec![vec![1, 0]]);
    }

    #[test]
    fn cluster_tags_restrict_candidates() {
        let mut h = ColoredHypergraph::new(2, 2, false);
        h.clusters = Some(vec![0, 1]);
        h.add_edge(1, &[0, 1], None).unwrap();
        let mut k = ColoredHypergraph::new(4, 2, false);
        k.clusters = Some(vec![0, 0, 1, 1]);
        k.add_edge(1, &[0, 2], None).unwrap();
        k.add_edge(1, &[1, 3], None).unwrap();
        k.add_edge(1, &[2, 3], None).unwrap(); // within cluster 1: unusable
        let copies = enumerate_copies(&h, &k, 100).unwrap();
        assert_eq!(copies, vec![vec![0, 2], vec![1, 3]]);
    }
}
