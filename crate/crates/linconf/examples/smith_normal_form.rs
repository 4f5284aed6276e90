//! Exact Smith normal form with unimodular witnesses, determinantal
//! divisors, and row reduction to gcd rows.
//!
//! Run with: cargo run --example smith_normal_form

use linconf::matrix::{
    divide_rows_by_gcd, extend_to_det, row_reduce_to_gcd_rows, smith_normal_form, IntMatrix,
};

fn show(m: &IntMatrix, name: &str) {
    println!("{} =", name);
    for r in 0..m.rows() {
        println!("  {:?}", m.row(r).iter().map(|e| e.to_string()).collect::<Vec<_>>());
    }
}

fn main() {
    let a = IntMatrix::from_i64_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
    show(&a, "A");

    let snf = smith_normal_form(&a);
    println!("diagonal invariants: {:?}", snf.diag.iter().map(|d| d.to_string()).collect::<Vec<_>>());
    show(&snf.u, "U");
    show(&snf.v, "V");
    assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.s);
    println!("U * A * V = S holds exactly; |det U| = {}, |det V| = {}", snf.u.det(), snf.v.det());

    // Determinantal divisors equal both the invariant products and the
    // gcd of all minors.
    for i in 1..=3 {
        println!(
            "D_{} = {} (gcd of all {0}x{0} minors: {})",
            i,
            a.determinantal_divisor(i).unwrap(),
            a.gcd_of_all_minors(i).unwrap()
        );
    }

    // Row reduction exposes the invariants as row gcds, and dividing them
    // out leaves a matrix with unit top determinantal.
    let b = IntMatrix::from_i64_rows(&[vec![2, 4, 6], vec![0, 6, 6]]);
    let (b1, _) = row_reduce_to_gcd_rows(&b).unwrap();
    show(&b1, "row-reduced B");
    let diag = smith_normal_form(&b).diag;
    let b2 = divide_rows_by_gcd(&b1, &diag).unwrap();
    show(&b2, "divided B");
    println!("top determinantal after division: {}", b2.determinantal_divisor(2).unwrap());

    // A wide matrix with nonzero top determinantal extends to a square with
    // that determinant.
    let wide = IntMatrix::from_i64_rows(&[vec![2, 4, 5]]);
    let n = extend_to_det(&wide).unwrap();
    show(&n, "extension of (2 4 5)");
    println!("det = {} = D_1", n.det());
}
