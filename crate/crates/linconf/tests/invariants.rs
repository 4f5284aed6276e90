//! Property tests: algebraic invariants checked against independent oracles
//! on randomized inputs.

use linconf::group::{FiniteAbelianGroup, DEFAULT_ENUM_CAP};
use linconf::matrix::{smith_normal_form, IntMatrix};
use linconf::perm::{copies_match_occurrences, Permutation};
use linconf::system::HomSystem;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=3, 1usize..=4).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-5i64..=5, c), r)
            .prop_map(|rows| IntMatrix::from_i64_rows(&rows))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_witnesses_hold(a in small_matrix()) {
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.s.clone());
        prop_assert!(snf.u.det().abs().is_one());
        prop_assert!(snf.v.det().abs().is_one());
        for w in snf.diag.windows(2) {
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn determinantal_equals_minor_gcd(a in small_matrix(), i in 1usize..=3) {
        let order = i.min(a.rows()).min(a.cols());
        let lhs = a.determinantal_divisor(order).unwrap();
        let rhs = a.gcd_of_all_minors(order).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn kernel_sizes_follow_gcds(orders in proptest::collection::vec(2u64..=9, 1..=2), d in 0u64..=12) {
        let g = FiniteAbelianGroup::normalize(&orders).unwrap();
        let expect: u64 = g.orders().iter().map(|&n| d.gcd(&n)).product();
        prop_assert_eq!(g.kernel_of_mult(d).len() as u64, expect);
    }

    #[test]
    fn enumeration_routes_agree(
        rows in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 1..=2),
        n in 2u64..=6,
    ) {
        let g = FiniteAbelianGroup::normalize(&[n]).unwrap();
        let m = IntMatrix::from_i64_rows(&rows);
        let sys = HomSystem::scalar(&m, &g, &vec![g.zero(); rows.len()]).unwrap();
        let fast = sys.enumerate_solutions(None, DEFAULT_ENUM_CAP).unwrap();
        let brute = sys.enumerate_solutions_full_scan(None, DEFAULT_ENUM_CAP).unwrap();
        prop_assert_eq!(fast.tuples.clone(), brute.tuples);
        // Every reported tuple solves the system on re-evaluation.
        for t in &fast.tuples {
            prop_assert!(sys.is_solution(t));
        }
    }

    #[test]
    fn homogeneous_solution_sets_are_subgroups(
        rows in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 2), 1..=2),
        n in 2u64..=6,
    ) {
        let g = FiniteAbelianGroup::normalize(&[n]).unwrap();
        let m = IntMatrix::from_i64_rows(&rows);
        let sys = HomSystem::scalar(&m, &g, &vec![g.zero(); rows.len()]).unwrap();
        let sols = sys.enumerate_solutions(None, DEFAULT_ENUM_CAP).unwrap();
        let set = sols.as_set();
        for a in &sols.tuples {
            for b in &sols.tuples {
                let sum: Vec<u64> = a
                    .iter()
                    .zip(b)
                    .zip(&sys.col_orders)
                    .map(|((&x, &y), &o)| (x + y) % o)
                    .collect();
                prop_assert!(set.contains(&sum));
            }
        }
    }

    #[test]
    fn padded_counts_scale_by_the_squared_order(
        rows in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 2), 1..=1),
        n in 2u64..=5,
    ) {
        let g = FiniteAbelianGroup::normalize(&[n]).unwrap();
        let m = IntMatrix::from_i64_rows(&rows);
        let sys = HomSystem::scalar(&m, &g, &[g.zero()]).unwrap();
        let padded = sys.pad_variables().unwrap();
        let before = sys.enumerate_solutions(None, DEFAULT_ENUM_CAP).unwrap().count() as u64;
        let after = padded.enumerate_solutions(None, DEFAULT_ENUM_CAP).unwrap().count() as u64;
        prop_assert_eq!(after, before * n * n);
    }

    #[test]
    fn pattern_copies_match_occurrences(
        tau_seed in 0u64..6,
        sigma_vals in proptest::sample::subsequence(vec![0usize, 1, 2, 3, 4], 5),
    ) {
        // tau over three letters, sigma a permutation of five.
        let taus = [
            vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2],
            vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0],
        ];
        let tau = Permutation::new(taus[tau_seed as usize].clone()).unwrap();
        let _ = sigma_vals;
        let mut values: Vec<usize> = (0..5).collect();
        // Derive a permutation of [0,5) deterministically from the seed.
        let mut state = tau_seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        for i in (1..values.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let j = (state >> 33) as usize % (i + 1);
            values.swap(i, j);
        }
        let sigma = Permutation::new(values).unwrap();
        let census = copies_match_occurrences(&tau, &sigma, 1_000_000).unwrap();
        prop_assert!(census.consistent());
    }
}

#[test]
fn group_mismatch_and_range_errors() {
    let g4 = FiniteAbelianGroup::normalize(&[4]).unwrap();
    let g6 = FiniteAbelianGroup::normalize(&[6]).unwrap();
    assert!(g4.zero().add(&g6.zero()).is_err());
    assert!(IntMatrix::identity(2).determinantal_divisor(3).is_err());
    assert!(BigInt::one().is_one());
}
