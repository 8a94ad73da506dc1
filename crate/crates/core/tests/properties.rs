use std::sync::OnceLock;

use proptest::prelude::*;

use looplab::catalog;
use looplab::enumerate::{
    canonical_form, canonical_table, enumerate, is_canonical, EnumerationJob,
};
use looplab::format::{emit, parse};
use looplab::identities::{is_cc, is_moufang, Law, MoufangVariant};
use looplab::probability::{
    associating_triples, moufang_bound_value, p_assoc, p_assoc_decomposed, p_comm,
};
use looplab::structure::{
    associator, commutator, is_subloop, nucleus, partial_set, pseudo_l, subloop_closure,
    trailing_partial_set, NucleusKind,
};
use looplab::table::isomorphic;
use looplab::theorems::has_nuclear_commutators;
use looplab::{ElementSet, LoopTable, Permutation};

/// Every loop of order at most 6 plus the catalog.
fn pool() -> &'static [LoopTable] {
    static POOL: OnceLock<Vec<LoopTable>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut v: Vec<LoopTable> = catalog::NAMES
            .iter()
            .map(|n| catalog::lookup(n).unwrap().table)
            .collect();
        for n in 1..=6 {
            v.extend(enumerate(&EnumerationJob::new(n)).unwrap().0);
        }
        v
    })
}

fn any_loop() -> impl Strategy<Value = LoopTable> {
    (0..pool().len()).prop_map(|i| pool()[i].clone())
}

/// A loop with a random relabeling applied.
fn relabeled() -> impl Strategy<Value = (LoopTable, Permutation)> {
    any_loop().prop_flat_map(|t| {
        let n = t.order();
        Just((0..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(move |images| (t.clone(), Permutation::from_images(images).unwrap()))
    })
}

fn is_isomorphism(f: &Permutation, a: &LoopTable, b: &LoopTable) -> bool {
    a.elements().all(|x| {
        a.elements()
            .all(|y| f.apply(a.mul(x, y)) == b.mul(f.apply(x), f.apply(y)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn divisions_solve_their_equations(t in any_loop(), a in 0usize..16, b in 0usize..16) {
        let (a, b) = (a % t.order(), b % t.order());
        prop_assert_eq!(t.mul(a, t.left_div(a, b)), b);
        prop_assert_eq!(t.mul(t.right_div(a, b), a), b);
        prop_assert_eq!(t.left_div(a, t.mul(a, b)), b);
    }

    #[test]
    fn associator_and_commutator_definitions(t in any_loop(), a in 0usize..16, b in 0usize..16, c in 0usize..16) {
        let n = t.order();
        let (a, b, c) = (a % n, b % n, c % n);
        let lhs = t.mul(t.mul(a, b), c);
        prop_assert_eq!(lhs, t.mul(t.mul(a, t.mul(b, c)), associator(&t, a, b, c)));
        prop_assert_eq!(t.mul(a, b), t.mul(t.mul(b, a), commutator(&t, a, b)));
        prop_assert_eq!(associator(&t, t.identity(), b, c), t.identity());
    }

    #[test]
    fn relabeling_preserves_isomorphism_class((t, f) in relabeled()) {
        let u = t.relabel(&f);
        prop_assert!(is_isomorphism(&f, &t, &u));
        let g = isomorphic(&t, &u).unwrap();
        prop_assert!(g.is_some());
        prop_assert!(is_isomorphism(&g.unwrap(), &t, &u));
        prop_assert_eq!(canonical_form(&t).unwrap(), canonical_form(&u).unwrap());
        prop_assert_eq!(p_assoc(&t), p_assoc(&u));
        prop_assert_eq!(p_comm(&t), p_comm(&u));
        prop_assert_eq!(
            nucleus(&t, NucleusKind::Full).len(),
            nucleus(&u, NucleusKind::Full).len()
        );
    }

    #[test]
    fn canonical_table_is_a_fixed_point(t in any_loop()) {
        let c = canonical_table(&t).unwrap();
        prop_assert!(is_canonical(&c));
        prop_assert_eq!(canonical_form(&c).unwrap(), canonical_form(&t).unwrap());
        prop_assert!(isomorphic(&t, &c).unwrap().is_some());
    }

    #[test]
    fn non_isomorphic_tables_get_different_forms(s in any_loop(), t in any_loop()) {
        if s.order() == t.order() {
            let iso = isomorphic(&s, &t).unwrap().is_some();
            prop_assert_eq!(iso, canonical_form(&s).unwrap() == canonical_form(&t).unwrap());
        }
    }

    #[test]
    fn text_format_round_trips((t, f) in relabeled()) {
        let u = t.relabel(&f);
        let parsed = parse(&emit(u.magma())).unwrap();
        prop_assert_eq!(parsed.validation.loop_table, Some(u));
    }

    #[test]
    fn moufang_variants_agree(t in any_loop()) {
        let one = is_moufang(&t, MoufangVariant::One).holds;
        prop_assert_eq!(one, is_moufang(&t, MoufangVariant::Two).holds);
        prop_assert_eq!(one, is_moufang(&t, MoufangVariant::Three).holds);
        prop_assert_eq!(one, is_moufang(&t, MoufangVariant::All).holds);
    }

    #[test]
    fn witnesses_are_genuine(t in any_loop()) {
        for law in [
            Law::Associative, Law::Moufang1, Law::Moufang2, Law::Moufang3,
            Law::Cc4, Law::Cc5, Law::LeftAlternative, Law::RightAlternative,
        ] {
            if let Some(w) = law.first_violation(&t) {
                prop_assert_eq!(w.len(), law.arity());
                prop_assert!(!law.holds_at(&t, &w));
            }
        }
        let verdict = is_cc(&t);
        prop_assert_eq!(verdict.holds, verdict.witness.is_none());
        if let Some(w) = verdict.witness {
            prop_assert!(w.is_genuine(&t));
        }
    }

    #[test]
    fn decomposition_matches_brute_force(t in any_loop()) {
        let (parts, frac) = p_assoc_decomposed(&t);
        let n = t.order() as u64;
        prop_assert_eq!(parts.total, n * n * n);
        prop_assert_eq!(parts.associating(), associating_triples(&t));
        prop_assert_eq!(frac, p_assoc(&t));
    }

    #[test]
    fn probabilities_lie_in_unit_interval(t in any_loop()) {
        let one = looplab::ExactFraction::ONE;
        prop_assert!(p_assoc(&t) <= one && p_comm(&t) <= one);
        prop_assert_eq!(p_assoc(&t) == one, looplab::identities::is_associative(&t).holds);
    }

    #[test]
    fn partial_sets_are_subloops_in_moufang_and_cc(t in any_loop(), x in 0usize..16, y in 0usize..16) {
        let (x, y) = (x % t.order(), y % t.order());
        if is_moufang(&t, MoufangVariant::One).holds || is_cc(&t).holds {
            let d = partial_set(&t, x, y);
            prop_assert!(is_subloop(&t, &d));
            prop_assert!(d.contains(t.identity()));
        }
    }

    #[test]
    fn closure_is_a_subloop(t in any_loop(), picks in proptest::collection::vec(0usize..16, 0..4)) {
        let s = ElementSet::from_elements(t.order(), picks.iter().map(|p| p % t.order()));
        let c = subloop_closure(&t, &s);
        prop_assert!(is_subloop(&t, &c));
        prop_assert!(s.is_subset(&c));
        if is_moufang(&t, MoufangVariant::One).holds {
            prop_assert_eq!(t.order() % c.len(), 0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn o16_pseudo_l_fixes_exactly_the_partial_set(x in 0usize..16, y in 0usize..16) {
        let t = &catalog::o16().table;
        let l = pseudo_l(t, x, y);
        let fixed = ElementSet::from_elements(16, l.map.fixed_points());
        prop_assert_eq!(fixed, partial_set(t, x, y));
    }

    #[test]
    fn o16_partial_sets_agree_with_trailing_form(x in 0usize..16, y in 0usize..16) {
        // in a Moufang loop [z,y,x] = e iff [x,y,z] = e
        let t = &catalog::o16().table;
        prop_assert_eq!(partial_set(t, x, y), trailing_partial_set(t, x, y));
    }

    #[test]
    fn relabeled_o16_keeps_its_invariants(images in Just((0..16usize).collect::<Vec<_>>()).prop_shuffle()) {
        let t = &catalog::o16().table;
        let u = t.relabel(&Permutation::from_images(images).unwrap());
        prop_assert_eq!(p_assoc(&u), looplab::ExactFraction::new(43, 64));
        prop_assert_eq!(moufang_bound_value(&u), looplab::ExactFraction::new(43, 64));
        prop_assert!(has_nuclear_commutators(&u));
        prop_assert_eq!(nucleus(&u, NucleusKind::Full).len(), 2);
    }
}
