mod common;

use proptest::prelude::*;

use common::{catalog_cases, catalog_presentations, check_associativity, check_boundary_squares, check_idempotence, letters};
use smash_core::algebras;
use smash_core::linalg::int;
use smash_core::pbw::AlgebraPresentation;
use smash_core::twist::check_distributive_law;

#[test]
fn normal_form_is_idempotent() {
    for p in catalog_presentations() {
        check_idempotence(&p).unwrap();
    }
}

#[test]
fn multiplication_is_associative_to_degree_four() {
    for p in catalog_presentations() {
        check_associativity(&p).unwrap();
    }
}

#[test]
fn catalog_is_confluent_at_bound_four() {
    for p in catalog_presentations() {
        let r = p.check_confluence(4);
        assert!(r.passed(), "{}: witness {:?}", p.name, r.witness());
    }
}

#[test]
fn catalog_laws_satisfy_the_hexagons() {
    for c in catalog_cases() {
        let r = check_distributive_law(&c.law, 4).unwrap();
        assert!(r.passed(), "{}: {:?}", c.smash.name, r.failures.first());
    }
}

#[test]
fn boundary_squares_to_zero() {
    assert!(check_boundary_squares().unwrap() > 0);
}

fn word_strategy(p: &AlgebraPresentation, max: usize) -> impl Strategy<Value = Vec<(usize, i32)>> {
    let ls = letters(p);
    prop::collection::vec(prop::sample::select(ls), 0..=max)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, rng_algorithm: prop::test_runner::RngAlgorithm::ChaCha, ..ProptestConfig::default() })]

    #[test]
    fn splitting_a_word_does_not_change_its_value(
        (w, cut) in word_strategy(&algebras::mq2(&int(2)).unwrap().smash, 6)
            .prop_flat_map(|w| { let n = w.len(); (Just(w), 0..=n) })
    ) {
        let p = algebras::mq2(&int(2)).unwrap().smash;
        let whole = p.normal_form(&w).unwrap();
        let split = p.multiply(&p.normal_form(&w[..cut]).unwrap(), &p.normal_form(&w[cut..]).unwrap());
        prop_assert_eq!(whole, split);
    }

    #[test]
    fn torus_words_reduce_consistently(
        (w, cut) in word_strategy(&algebras::qtorus(&int(3)).unwrap().smash, 8)
            .prop_flat_map(|w| { let n = w.len(); (Just(w), 0..=n) })
    ) {
        let p = algebras::qtorus(&int(3)).unwrap().smash;
        let whole = p.normal_form(&w).unwrap();
        let split = p.multiply(&p.normal_form(&w[..cut]).unwrap(), &p.normal_form(&w[cut..]).unwrap());
        prop_assert_eq!(whole, split);
    }
}
