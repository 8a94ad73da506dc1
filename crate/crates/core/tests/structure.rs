use looplab::catalog::{self, o16, o16_labels, q8};
use looplab::identities::is_associative;
use looplab::structure::{
    adjoint, all_subloops, associator, cosets, is_associative_subset, nucleus, partial_set,
    pseudo_l, quotient, subloop_closure, NucleusKind, Side,
};
use looplab::table::isomorphic;
use looplab::theorems::{verify_claims, ClaimId};
use looplab::{ElementSet, LoopTable};

fn o() -> &'static LoopTable {
    &o16().table
}

#[test]
fn o16_contains_q8() {
    let t = o();
    let q = &q8().table;
    let eights: Vec<ElementSet> = all_subloops(t)
        .unwrap()
        .into_iter()
        .filter(|s| s.len() == 8)
        .collect();
    assert_eq!(eights.len(), 7);
    let first = &eights[0];
    let members = first.members().to_vec();
    let rows: Vec<Vec<usize>> = members
        .iter()
        .map(|&a| {
            members
                .iter()
                .map(|&b| members.iter().position(|&m| m == t.mul(a, b)).unwrap())
                .collect()
        })
        .collect();
    let sub = LoopTable::from_rows(&rows).unwrap();
    assert!(isomorphic(&sub, q).unwrap().is_some());
}

#[test]
fn o16_units_square_to_minus_one() {
    let t = o();
    let minus_one = o16_labels::neg_unit(0);
    for k in 1..8 {
        assert_eq!(t.mul(o16_labels::unit(k), o16_labels::unit(k)), minus_one);
    }
    assert_eq!(
        nucleus(t, NucleusKind::Full),
        ElementSet::from_elements(16, [o16_labels::unit(0), minus_one])
    );
}

#[test]
fn o16_strict_chain_of_subloops() {
    let t = o();
    let n = nucleus(t, NucleusKind::Full);
    let mut seen = false;
    for x in t.elements().filter(|x| !n.contains(*x)) {
        let xa = adjoint(t, &ElementSet::from_elements(16, [x])).unwrap();
        assert!(xa.len() <= 4);
        for u in t.elements() {
            let d = partial_set(t, x, u);
            let sizes = [n.len(), xa.len(), d.len(), 16];
            if n.is_subset(&xa) && xa.is_subset(&d) && sizes == [2, 4, 8, 16] {
                seen = true;
            }
        }
    }
    assert!(seen, "no strict chain N < {{x}}' < ∂ < G");
}

#[test]
fn o16_two_element_closures_are_associative() {
    let t = o();
    for x in t.elements() {
        for y in t.elements() {
            let s = subloop_closure(t, &ElementSet::from_elements(16, [x, y]));
            assert!(is_associative_subset(t, &s));
            assert!(s.len() < 16);
        }
    }
}

#[test]
fn o16_quotient_by_nucleus() {
    let t = o();
    let n = nucleus(t, NucleusKind::Full);
    let c = cosets(t, &n, Side::Right).unwrap();
    assert!(c.partition);
    assert_eq!(c.cosets.len(), 8);
    let q = quotient(t, &n).unwrap();
    let target = catalog::elementary_abelian(8).unwrap().table;
    assert!(isomorphic(&q.table, &target).unwrap().is_some());
    assert!(is_associative(&q.table).holds);
}

#[test]
fn pseudo_l_uses_the_working_composition_order() {
    let t = o();
    // z -> x(y((yx)\z)) is the other natural reading; it fails the fixed-point form
    let other = |x: usize, y: usize, z: usize| t.mul(x, t.mul(y, t.left_div(t.mul(y, x), z)));
    let mut other_fails = false;
    for x in t.elements() {
        for y in t.elements() {
            let l = pseudo_l(t, x, y);
            for z in t.elements() {
                let a = associator(t, z, y, x);
                assert_eq!(t.mul(l.map.apply(z), a), z);
                if t.mul(other(x, y, z), a) != z {
                    other_fails = true;
                }
            }
        }
    }
    assert!(other_fails);
}

#[test]
fn all_claims_hold_on_the_catalog() {
    for name in catalog::NAMES {
        let t = catalog::lookup(name).unwrap().table;
        for v in verify_claims(&t, &ClaimId::ALL).unwrap() {
            assert!(!v.falsified(), "{name}: {:?}", v);
        }
    }
    let applicable: Vec<ClaimId> = verify_claims(o(), &ClaimId::ALL)
        .unwrap()
        .into_iter()
        .filter(|v| v.applicable && v.verified)
        .map(|v| v.claim)
        .collect();
    assert_eq!(applicable, ClaimId::ALL);
}
