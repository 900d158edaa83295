mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #[test]
    fn field_axioms_hold(a in cyc(), b in cyc(), c in cyc()) {
        field_axioms(&a, &b, &c)?;
    }

    #[test]
    fn roots_of_unity_have_exact_order(n in 1u32..=120, k in -500i64..500) {
        zeta_order(n, k)?;
    }

    #[test]
    fn embedding_is_a_ring_map(
        (n, a, b, t) in coeff_vec().prop_flat_map(|(n, a)| {
            let len = a.len();
            (Just(n), Just(a), prop::collection::vec(-4i64..=4, len), prop::sample::select(vec![1usize, 2, 3]))
        })
    ) {
        embedding_homomorphism(n, &a, &b, t)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn char_poly_is_a_class_function(a in matrix(3), p in invertible(3)) {
        charpoly_invariance(&a, &p)?;
    }

    #[test]
    fn commutant_contains_exactly_commuting(a in matrix(3)) {
        commutant_correct(&a)?;
    }

    #[test]
    fn char_poly_two_by_two(a in matrix(2), p in invertible(2)) {
        charpoly_invariance(&a, &p)?;
    }
}

#[test]
fn distinct_diagonal_commutants() {
    for k in 1..=6 {
        commutant_of_distinct_diagonal(k).unwrap();
    }
}

#[test]
fn fixed_seed_suite_is_clean() {
    for (name, r) in property_suite(11, 32) {
        assert!(r.is_ok(), "{name}: {r:?}");
    }
}
