mod common;

use common::*;
use evident_core::logic::{th_closure, theory_equal, theory_subset, truth_table, InferenceRule, TheoryBase};
use evident_core::{entails, satisfiable, Formula};
use proptest::prelude::*;

fn arb_formula(atoms: usize) -> impl Strategy<Value = Formula> {
    any::<u64>().prop_map(move |seed| random_formula(&mut rng(seed), atoms, 3))
}

fn arb_rules(atoms: usize) -> impl Strategy<Value = Vec<InferenceRule>> {
    prop::collection::vec(
        (any::<u64>(), any::<bool>()).prop_map(move |(seed, top)| {
            let mut r = rng(seed);
            let premise = if top { Formula::Top } else { random_formula(&mut r, atoms, 1) };
            InferenceRule::new(premise, random_formula(&mut r, atoms, 2))
        }),
        0..5,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn entails_matches_truth_tables(gamma in prop::collection::vec(arb_formula(10), 0..5), d in arb_formula(10)) {
        prop_assert_eq!(entails(&gamma, &d), tt_entails(&gamma, &d, 10));
        prop_assert_eq!(entails(&gamma, &d), truth_table::entails(&gamma, &d));
        prop_assert_eq!(satisfiable(&gamma), truth_table::satisfiable(&gamma));
    }

    #[test]
    fn closure_is_a_sound_fixpoint(u in prop::collection::vec(arb_formula(4), 0..3), j in arb_rules(4)) {
        let k = th_closure(&u, &j);
        for f in &u {
            prop_assert!(k.entails(f));
        }
        for r in &j {
            prop_assert!(!k.entails(&r.premise) || k.entails(&r.consequent));
        }
    }

    #[test]
    fn closure_is_idempotent(u in prop::collection::vec(arb_formula(4), 0..3), j in arb_rules(4)) {
        let k = th_closure(&u, &j);
        let again = th_closure(k.formulas(), &j);
        prop_assert!(theory_equal(&k, &again));
    }

    #[test]
    fn closure_is_monotone(
        u in prop::collection::vec(arb_formula(4), 0..3),
        extra in arb_formula(4),
        j in arb_rules(4),
        more in arb_rules(4),
    ) {
        let base = th_closure(&u, &j);
        let mut bigger_u = u.clone();
        bigger_u.push(extra);
        prop_assert!(theory_subset(&base, &th_closure(&bigger_u, &j)));
        let mut bigger_j = j.clone();
        bigger_j.extend(more);
        prop_assert!(theory_subset(&base, &th_closure(&u, &bigger_j)));
    }

    #[test]
    fn closure_ignores_rule_order(u in prop::collection::vec(arb_formula(4), 0..3), j in arb_rules(4), seed: u64) {
        let reordered = shuffled(&mut rng(seed), &j);
        prop_assert!(theory_equal(&th_closure(&u, &j), &th_closure(&u, &reordered)));
    }

    #[test]
    fn subset_is_a_preorder(a in prop::collection::vec(arb_formula(3), 0..3),
                            b in prop::collection::vec(arb_formula(3), 0..3),
                            c in prop::collection::vec(arb_formula(3), 0..3)) {
        let (a, b, c) = (TheoryBase::new(a), TheoryBase::new(b), TheoryBase::new(c));
        prop_assert!(theory_subset(&a, &a));
        if theory_subset(&a, &b) && theory_subset(&b, &c) {
            prop_assert!(theory_subset(&a, &c));
        }
        prop_assert_eq!(theory_equal(&a, &b), theory_subset(&a, &b) && theory_subset(&b, &a));
    }
}

#[test]
fn theory_equal_by_enumeration() {
    // {p, p -> q} and {p, q} have the same models over {p, q}
    let lhs = [v("p0"), Formula::implies(v("p0"), v("p1"))];
    let rhs = [v("p0"), v("p1")];
    let same_models = (0..4u32).all(|w| lhs.iter().all(|f| holds(f, w)) == rhs.iter().all(|f| holds(f, w)));
    assert!(same_models);
    assert!(theory_equal(&TheoryBase::new(lhs), &TheoryBase::new(rhs)));
}

#[test]
fn one_way_rules_block_contraposition() {
    let k = th_closure(&[Formula::not(v("c"))], &[InferenceRule::new(v("a"), v("c"))]);
    assert!(!k.entails(&Formula::not(v("a"))));
}
