//! Finite abelian groups in invariant-factor form: canonicalization,
//! element arithmetic, kernels of multiplication, and the homocyclic cover.
//!
//! Run with: cargo run --example group_arithmetic

use linconf::group::{FiniteAbelianGroup, DEFAULT_ENUM_CAP};

fn main() {
    // Z4 x Z6 is not in invariant-factor form; normalization merges the
    // factors into Z12 x Z2.
    let g = FiniteAbelianGroup::normalize(&[4, 6]).unwrap();
    println!("Z4 x Z6 normalizes to orders {:?}", g.orders());

    let a = g.element(&[7, 1]).unwrap();
    let b = g.element(&[9, 1]).unwrap();
    println!("({:?}) + ({:?}) = {:?}", a.coords, b.coords, a.add(&b).unwrap().coords);
    println!("-({:?}) = {:?}", a.coords, a.neg().coords);
    println!("5 * ({:?}) = {:?}", a.coords, a.scalar_mul(5).coords);

    // Kernel of multiplication by d: one subgroup per invariant factor.
    for d in [1u64, 2, 3, 4] {
        let kernel = g.kernel_of_mult(d);
        println!(
            "kernel of {}x in Z12 x Z2 has {} elements: {:?}",
            d,
            kernel.len(),
            kernel.iter().map(|e| e.coords.clone()).collect::<Vec<_>>()
        );
    }

    // The homocyclic cover replaces every factor by the largest one; the
    // reduction map has uniform fibers.
    let lift = g.quotient_lift();
    println!(
        "cover of {:?} is {:?} with fiber size {}",
        g.orders(),
        lift.source.orders(),
        lift.beta
    );
    let elements = lift.source.enumerate(DEFAULT_ENUM_CAP).unwrap();
    let mapped = lift.apply(&elements[13]).unwrap();
    println!(
        "cover element {:?} reduces to {:?}",
        elements[13].coords, mapped.coords
    );
}
