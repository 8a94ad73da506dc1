//! Associators, commutators, nuclei, adjoint sets, subloops, cosets,
//! quotients, and the inner mapping `L(x, y)`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{LoopError, Result};
use crate::perm::Permutation;
use crate::table::{Element, LoopTable, MagmaTable};

/// Default bound on the order for exhaustive subloop enumeration.
pub const DEFAULT_SUBLOOP_BOUND: usize = 16;

/// A sorted, duplicate-free set of elements of a loop of order `order`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    order: usize,
    members: Vec<Element>,
}

impl ElementSet {
    pub fn from_elements<I: IntoIterator<Item = Element>>(order: usize, elements: I) -> Self {
        let mut members: Vec<Element> = elements.into_iter().collect();
        assert!(members.iter().all(|&x| x < order), "element out of range");
        members.sort_unstable();
        members.dedup();
        ElementSet { order, members }
    }

    fn from_mask(mask: &[bool]) -> Self {
        ElementSet {
            order: mask.len(),
            members: (0..mask.len()).filter(|&x| mask[x]).collect(),
        }
    }

    pub fn full(order: usize) -> Self {
        ElementSet {
            order,
            members: (0..order).collect(),
        }
    }

    pub fn members(&self) -> &[Element] {
        &self.members
    }

    pub fn ambient_order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: Element) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        self.members.iter().copied()
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl Serialize for ElementSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `[a, b, c]`: the unique `x` with `(ab)c = (a(bc))x`.
#[inline]
pub fn associator(t: &LoopTable, a: Element, b: Element, c: Element) -> Element {
    let lhs = t.mul(t.mul(a, b), c);
    let rhs = t.mul(a, t.mul(b, c));
    t.left_div(rhs, lhs)
}

/// `[x, y]`: the unique `c` with `xy = (yx)c`.
#[inline]
pub fn commutator(t: &LoopTable, x: Element, y: Element) -> Element {
    t.left_div(t.mul(y, x), t.mul(x, y))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NucleusKind {
    Left,
    Middle,
    Right,
    Full,
}

pub fn nucleus(t: &LoopTable, kind: NucleusKind) -> ElementSet {
    let n = t.order();
    let e = t.identity();
    let in_slot = |a: Element, slot: usize| {
        (0..n).all(|x| {
            (0..n).all(|y| {
                let v = match slot {
                    0 => associator(t, a, x, y),
                    1 => associator(t, x, a, y),
                    _ => associator(t, x, y, a),
                };
                v == e
            })
        })
    };
    let members = (0..n).filter(|&a| match kind {
        NucleusKind::Left => in_slot(a, 0),
        NucleusKind::Middle => in_slot(a, 1),
        NucleusKind::Right => in_slot(a, 2),
        NucleusKind::Full => in_slot(a, 0) && in_slot(a, 1) && in_slot(a, 2),
    });
    ElementSet::from_elements(n, members)
}

/// `A′ = {x : [a, x, g] = 1 for all a ∈ A, g ∈ G}`. The adjoint variable
/// sits in the middle slot.
pub fn adjoint(t: &LoopTable, set: &ElementSet) -> Result<ElementSet> {
    if set.is_empty() {
        return Err(LoopError::EmptySet);
    }
    let n = t.order();
    let e = t.identity();
    let members = (0..n).filter(|&x| {
        set.iter()
            .all(|a| (0..n).all(|g| associator(t, a, x, g) == e))
    });
    Ok(ElementSet::from_elements(n, members))
}

/// `∂_{x,y} = {z : [z, y, x] = 1}`.
pub fn partial_set(t: &LoopTable, x: Element, y: Element) -> ElementSet {
    let e = t.identity();
    ElementSet::from_elements(
        t.order(),
        t.elements().filter(|&z| associator(t, z, y, x) == e),
    )
}

/// `{z : [x, y, z] = 1}`, the third-slot counterpart of [`partial_set`].
/// The two coincide whenever associator triviality is permutation invariant
/// (Moufang and CC loops).
pub fn trailing_partial_set(t: &LoopTable, x: Element, y: Element) -> ElementSet {
    let e = t.identity();
    ElementSet::from_elements(
        t.order(),
        t.elements().filter(|&z| associator(t, x, y, z) == e),
    )
}

/// Smallest subloop containing `set`: closed under multiplication and both
/// divisions. The empty set generates `{e}`.
pub fn subloop_closure(t: &LoopTable, set: &ElementSet) -> ElementSet {
    let n = t.order();
    let mut inside = vec![false; n];
    let mut members = Vec::with_capacity(n);
    for x in std::iter::once(t.identity()).chain(set.iter()) {
        if !std::mem::replace(&mut inside[x], true) {
            members.push(x);
        }
    }
    let mut i = 0;
    while i < members.len() {
        for j in 0..=i {
            let (u, v) = (members[i], members[j]);
            for w in [
                t.mul(u, v),
                t.mul(v, u),
                t.left_div(u, v),
                t.left_div(v, u),
                t.right_div(u, v),
                t.right_div(v, u),
            ] {
                if !inside[w] {
                    inside[w] = true;
                    members.push(w);
                }
            }
        }
        i += 1;
    }
    ElementSet::from_mask(&inside)
}

pub fn is_subloop(t: &LoopTable, set: &ElementSet) -> bool {
    if !set.contains(t.identity()) {
        return false;
    }
    set.iter().all(|u| {
        set.iter().all(|v| {
            set.contains(t.mul(u, v))
                && set.contains(t.left_div(u, v))
                && set.contains(t.right_div(u, v))
        })
    })
}

/// True iff every triple drawn from `set` associates.
pub fn is_associative_subset(t: &LoopTable, set: &ElementSet) -> bool {
    set.iter().all(|x| {
        set.iter().all(|y| {
            let xy = t.mul(x, y);
            set.iter().all(|z| t.mul(xy, z) == t.mul(x, t.mul(y, z)))
        })
    })
}

/// Every subloop, sorted by size then members.
///
/// Starting from `{e}`, each found subloop `H` is extended to
/// `⟨H ∪ {g}⟩` for every `g ∉ H` until no new subloop appears. Every subloop
/// is reached this way by adding its elements one at a time.
pub fn all_subloops(t: &LoopTable) -> Result<Vec<ElementSet>> {
    all_subloops_bounded(t, DEFAULT_SUBLOOP_BOUND)
}

pub fn all_subloops_bounded(t: &LoopTable, bound: usize) -> Result<Vec<ElementSet>> {
    let n = t.order();
    if n > bound {
        return Err(LoopError::OrderTooLarge {
            order: n,
            max: bound,
        });
    }
    Ok(subloops_within(t, &ElementSet::full(n)))
}

/// Every subloop contained in `ambient`, sorted by size then members.
/// `ambient` should itself be a subloop.
pub fn subloops_within(t: &LoopTable, ambient: &ElementSet) -> Vec<ElementSet> {
    let n = t.order();
    let trivial = subloop_closure(t, &ElementSet::from_elements(n, []));
    let mut seen: HashSet<ElementSet> = HashSet::from([trivial.clone()]);
    let mut queue = VecDeque::from([trivial]);
    while let Some(h) = queue.pop_front() {
        for g in ambient.iter() {
            if h.contains(g) {
                continue;
            }
            let k = subloop_closure(
                t,
                &ElementSet::from_elements(n, h.iter().chain(std::iter::once(g))),
            );
            if k.is_subset(ambient) && seen.insert(k.clone()) {
                queue.push_back(k);
            }
        }
    }
    let mut out: Vec<ElementSet> = seen.into_iter().collect();
    out.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.members.cmp(&b.members))
    });
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug)]
pub struct Cosets {
    /// Distinct cosets, in order of their smallest element.
    pub cosets: Vec<ElementSet>,
    /// True iff the cosets are pairwise disjoint and cover the loop.
    pub partition: bool,
    /// `n / |H|`, reported only when the cosets partition.
    pub index: Option<usize>,
}

pub fn cosets(t: &LoopTable, h: &ElementSet, side: Side) -> Result<Cosets> {
    if !is_subloop(t, h) {
        return Err(LoopError::NotASubloop);
    }
    let n = t.order();
    let mut distinct: Vec<ElementSet> = Vec::new();
    for x in 0..n {
        let c = ElementSet::from_elements(
            n,
            h.iter().map(|y| match side {
                Side::Left => t.mul(x, y),
                Side::Right => t.mul(y, x),
            }),
        );
        if !distinct.contains(&c) {
            distinct.push(c);
        }
    }
    distinct.sort_by_key(|c| c.members[0]);
    let mut hits = vec![0usize; n];
    for c in &distinct {
        for x in c.iter() {
            hits[x] += 1;
        }
    }
    let partition = hits.iter().all(|&k| k == 1);
    let index = partition.then(|| n / h.len());
    Ok(Cosets {
        cosets: distinct,
        partition,
        index,
    })
}

/// Normality as the three set equations `xH = Hx`, `(Hx)y = H(xy)`,
/// `y(xH) = (yx)H`.
pub fn is_normal(t: &LoopTable, h: &ElementSet) -> Result<bool> {
    if !is_subloop(t, h) {
        return Err(LoopError::NotASubloop);
    }
    let n = t.order();
    let set = |it: &mut dyn Iterator<Item = Element>| ElementSet::from_elements(n, it);
    for x in 0..n {
        let xh = set(&mut h.iter().map(|a| t.mul(x, a)));
        let hx = set(&mut h.iter().map(|a| t.mul(a, x)));
        if xh != hx {
            return Ok(false);
        }
        for y in 0..n {
            let xy = t.mul(x, y);
            let yx = t.mul(y, x);
            let hx_y = set(&mut h.iter().map(|a| t.mul(t.mul(a, x), y)));
            let h_xy = set(&mut h.iter().map(|a| t.mul(a, xy)));
            if hx_y != h_xy {
                return Ok(false);
            }
            let y_xh = set(&mut h.iter().map(|a| t.mul(y, t.mul(x, a))));
            let yx_h = set(&mut h.iter().map(|a| t.mul(yx, a)));
            if y_xh != yx_h {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The quotient loop `G/H` with coset `i` as element `i`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub table: LoopTable,
    pub cosets: Vec<ElementSet>,
}

pub fn quotient(t: &LoopTable, h: &ElementSet) -> Result<Quotient> {
    if !is_normal(t, h)? {
        return Err(LoopError::NotNormal);
    }
    let classes = cosets(t, h, Side::Left)?;
    if !classes.partition {
        return Err(LoopError::NotNormal);
    }
    let n = t.order();
    let mut class_of = vec![0; n];
    for (i, c) in classes.cosets.iter().enumerate() {
        for x in c.iter() {
            class_of[x] = i;
        }
    }
    let k = classes.cosets.len();
    let mut products = vec![0; k * k];
    for (i, ci) in classes.cosets.iter().enumerate() {
        for (j, cj) in classes.cosets.iter().enumerate() {
            let target = class_of[t.mul(ci.members[0], cj.members[0])];
            // representative independence
            for a in ci.iter() {
                for b in cj.iter() {
                    if class_of[t.mul(a, b)] != target {
                        return Err(LoopError::NotNormal);
                    }
                }
            }
            products[i * k + j] = target;
        }
    }
    let table = LoopTable::new(MagmaTable::new(k, products)?)?;
    Ok(Quotient {
        table,
        cosets: classes.cosets,
    })
}

/// A bijection `f` with companion `c` satisfying
/// `f(x)·(f(y)·c) = f(xy)·c` for all `x, y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoAutomorphism {
    pub map: Permutation,
    pub companion: Element,
}

/// `L(x, y) = L_x ∘ L_y ∘ L_{yx}⁻¹`, read left to right as a sequence of
/// applications: `z ↦ (yx) \ (y·(x·z))`. With this order `L(x, y)` fixes the
/// identity and `L(x, y)(z)·[z, y, x] = z` in Moufang loops; the opposite
/// order `z ↦ x·(y·((yx) \ z))` does not even fix `e` in O16.
pub fn pseudo_l(t: &LoopTable, x: Element, y: Element) -> PseudoAutomorphism {
    let yx = t.mul(y, x);
    let images = t
        .elements()
        .map(|z| t.left_div(yx, t.mul(y, t.mul(x, z))))
        .collect();
    PseudoAutomorphism {
        map: Permutation::from_images(images).expect("composition of translations"),
        companion: commutator(t, y, x),
    }
}

pub fn is_pseudo_automorphism(t: &LoopTable, f: &Permutation, c: Element) -> bool {
    t.elements().all(|x| {
        let fx = f.apply(x);
        t.elements()
            .all(|y| t.mul(fx, t.mul(f.apply(y), c)) == t.mul(f.apply(t.mul(x, y)), c))
    })
}
