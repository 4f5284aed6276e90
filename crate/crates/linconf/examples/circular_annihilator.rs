//! Circular matrices and their banded annihilators: the stacked extension
//! whose row windows all have determinant coprime to the modulus, and the
//! integer matrix C with A C = 0 supported on a cyclic band.
//!
//! Run with: cargo run --example circular_annihilator

use linconf::matrix::{
    build_band_annihilator, check_band_annihilator, circular_extension, is_block_n_circular,
    IntMatrix,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

fn show(m: &IntMatrix, name: &str) {
    println!("{} =", name);
    for r in 0..m.rows() {
        println!("  {:?}", m.row(r).iter().map(|e| e.to_string()).collect::<Vec<_>>());
    }
}

fn main() {
    // The cyclic sum matrix is circular for any modulus: every window of
    // one column has determinant 1.
    let a = IntMatrix::from_i64_rows(&[vec![1, 1, 1]]);
    println!("(1 1 1) circular mod 5: {}", is_block_n_circular(&a, 1, 5).unwrap());

    let c = build_band_annihilator(&a, 1, 5).unwrap();
    show(&c, "banded annihilator C");
    check_band_annihilator(&a, &c, 1, 5).unwrap();
    println!("A * C = 0 exactly; band and edge-block coprimality verified");

    // A shear extends to a five-block stack whose every sliding window of
    // two rows has odd determinant.
    let m = IntMatrix::from_i64_rows(&[vec![1, 1], vec![0, 1]]);
    let stack = circular_extension(&m, 4).unwrap();
    show(&stack, "stacked extension of the shear mod 4");
    let n_big = BigInt::from(4);
    for start in 0..=stack.rows() - 2 {
        let rows: Vec<usize> = (start..start + 2).collect();
        let cols: Vec<usize> = (0..2).collect();
        let det = stack.submatrix(&rows, &cols).det();
        assert!(det.gcd(&n_big).is_one());
        println!("  window at row {}: det {}", start, det);
    }

    // (I | stack) is then circular with the window size of the full stack,
    // and it too has a banded annihilator.
    let wide = IntMatrix::hstack(&IntMatrix::identity(stack.rows()), &stack);
    println!(
        "(I | stack) circular mod 4: {}",
        is_block_n_circular(&wide, 1, 4).unwrap()
    );
    let band = build_band_annihilator(&wide, 1, 4).unwrap();
    check_band_annihilator(&wide, &band, 1, 4).unwrap();
    println!("banded annihilator of the widened stack verified");
}
