//! Permutation patterns as bicolored tournaments: occurrences of a pattern
//! equal the directed colored copies of its digraph, counted both ways.
//!
//! Run with: cargo run --example permutation_patterns

use linconf::hypergraph::{enumerate_copies, greedy_edge_cover};
use linconf::perm::{build_pattern_digraph, copies_match_occurrences, occurrences, Permutation};

fn main() {
    let sigma = Permutation::parse("3 1 4 0 2 5").unwrap();
    let tau = Permutation::parse("1 0 2").unwrap();

    let g = build_pattern_digraph(&sigma);
    println!(
        "text digraph: {} vertices, {} arcs ({} blue, {} red)",
        g.n_vertices,
        g.edges.len(),
        g.edges_of_color(1).count(),
        g.edges_of_color(2).count()
    );

    let occ = occurrences(&tau, &sigma).unwrap();
    println!("pattern {:?} occurs {} times in {:?}:", tau.values, occ.len(), sigma.values);
    for idx in &occ {
        let letters: Vec<usize> = idx.iter().map(|&i| sigma.values[i]).collect();
        println!("  positions {:?} carry letters {:?}", idx, letters);
    }

    let census = copies_match_occurrences(&tau, &sigma, 1_000_000).unwrap();
    println!(
        "digraph copies: {}, occurrences: {}, maps monotone: {}, index sets equal: {}",
        census.copies.len(),
        census.occurrences.len(),
        census.all_monotone,
        census.sets_match
    );

    // A self-embedding is rigid: exactly one copy.
    let census = copies_match_occurrences(&sigma, &sigma, 1_000_000).unwrap();
    println!("self-embedding count for the text: {}", census.copies.len());

    // Heuristic deletion demo: a greedy cover of index pairs destroys every
    // occurrence. Deleting an arc of the text digraph stands for deleting
    // that index pair; afterwards no copy of the pattern digraph remains.
    let g_tau = build_pattern_digraph(&tau);
    let mut pruned = build_pattern_digraph(&sigma);
    let cover = greedy_edge_cover(&g_tau, &pruned, 1_000_000).unwrap();
    println!("greedy pair cover deletes {} of {} arcs:", cover.len(), pruned.edges.len());
    for (color, pair) in &cover {
        println!("  pair {:?} (arc color {})", pair, color);
    }
    pruned
        .edges
        .retain(|e| !cover.contains(&(e.color, e.verts.clone())));
    let survivors = enumerate_copies(&g_tau, &pruned, 1_000_000).unwrap();
    println!("occurrences surviving the deletion: {}", survivors.len());
    assert!(survivors.is_empty());
}
