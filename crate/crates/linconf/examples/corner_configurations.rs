//! Corner configurations and homothetic patterns: the grid systems whose
//! solutions are a point plus a shared shift along each axis, censused two
//! independent ways over dense subsets.
//!
//! Run with: cargo run --example corner_configurations

use linconf::apps::{
    build_corner_system, build_homothetic_system, count_corners, sample_subset,
};
use linconf::group::{FiniteAbelianGroup, DEFAULT_ENUM_CAP};
use linconf::matrix::IntMatrix;
use linconf::system::project_solutions;

fn main() {
    let z3 = FiniteAbelianGroup::normalize(&[3]).unwrap();
    let m = 2;
    let sys = build_corner_system(&z3, m).unwrap();
    let sols = sys.enumerate_solutions(None, DEFAULT_ENUM_CAP).unwrap();
    println!(
        "corner system over the 3x3 grid: {} points per configuration, {} solutions",
        sys.num_vars(),
        sols.count()
    );
    for i in 0..sys.num_vars() {
        let proj = project_solutions(&sys, &sols, i).unwrap();
        println!("  projection {} covers {} grid points", i + 1, proj.len());
    }

    // Census inside a pseudo-random five-point subset, two ways.
    let subset = sample_subset(&[3, 3], 5, 7);
    println!("subset: {:?}", subset.iter().collect::<Vec<_>>());
    let census = count_corners(&sys, &z3, m, &subset, DEFAULT_ENUM_CAP).unwrap();
    println!(
        "configurations inside: {} by direct scan, {} by restricted enumeration",
        census.hits, census.hits_by_enumeration
    );

    // Rectangles as a homothetic configuration over Z3 x Z3 with two axis
    // subgroups.
    let g = FiniteAbelianGroup::normalize(&[3, 3]).unwrap();
    let zero = IntMatrix::zero(2, 4);
    let first = IntMatrix::from_i64_rows(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
    let second = IntMatrix::from_i64_rows(&[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
    let both = IntMatrix::from_i64_rows(&[vec![1, 0, 1, 0], vec![0, 1, 0, 1]]);
    let rect = build_homothetic_system(
        &g,
        &[vec![vec![1, 0]], vec![vec![0, 1]]],
        &[zero, first, second, both],
        DEFAULT_ENUM_CAP,
    )
    .unwrap();
    let rect_sols = rect.enumerate_solutions(None, DEFAULT_ENUM_CAP).unwrap();
    println!(
        "rectangle system: {} solutions = |G| * |G1| * |G2| = 9 * 3 * 3",
        rect_sols.count()
    );
}
