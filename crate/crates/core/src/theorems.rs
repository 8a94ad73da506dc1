//! Machine checks of the association-probability theorems and the structural
//! facts they rest on.
//!
//! A verdict whose hypotheses are not met is reported as not applicable rather
//! than vacuously verified.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{LoopError, Result};
use crate::identities::{is_associative, is_cc, is_moufang, MoufangVariant};
use crate::probability::{cc_bound_value, moufang_bound_value, p_assoc, ExactFraction};
use crate::structure::{
    all_subloops, associator, commutator, cosets, is_associative_subset, is_normal, is_subloop,
    nucleus, partial_set, pseudo_l, quotient, subloop_closure, subloops_within, ElementSet,
    NucleusKind, Side,
};
use crate::table::{Element, LoopTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ClaimId {
    #[serde(rename = "MOUFANG_BOUND")]
    MoufangBound,
    #[serde(rename = "CC_BOUND")]
    CcBound,
    #[serde(rename = "INDEX_8")]
    Index8,
    #[serde(rename = "TWO_GEN")]
    TwoGen,
    #[serde(rename = "MOUFANG_THM")]
    MoufangThm,
    #[serde(rename = "LAGRANGE")]
    Lagrange,
    #[serde(rename = "FIXED_POINT")]
    FixedPoint,
}

impl ClaimId {
    pub const ALL: [ClaimId; 7] = [
        ClaimId::MoufangBound,
        ClaimId::CcBound,
        ClaimId::Index8,
        ClaimId::TwoGen,
        ClaimId::MoufangThm,
        ClaimId::Lagrange,
        ClaimId::FixedPoint,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ClaimId::MoufangBound => "MOUFANG_BOUND",
            ClaimId::CcBound => "CC_BOUND",
            ClaimId::Index8 => "INDEX_8",
            ClaimId::TwoGen => "TWO_GEN",
            ClaimId::MoufangThm => "MOUFANG_THM",
            ClaimId::Lagrange => "LAGRANGE",
            ClaimId::FixedPoint => "FIXED_POINT",
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ClaimId {
    type Err = LoopError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        ClaimId::ALL
            .into_iter()
            .find(|c| c.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| LoopError::UnknownClaim(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremVerdict {
    pub claim: ClaimId,
    pub applicable: bool,
    pub verified: bool,
    pub evidence: BTreeMap<&'static str, String>,
    pub counterexample: Option<String>,
}

impl TheoremVerdict {
    fn not_applicable(claim: ClaimId, reason: &str) -> Self {
        TheoremVerdict {
            claim,
            applicable: false,
            verified: false,
            evidence: BTreeMap::from([("reason", reason.to_string())]),
            counterexample: None,
        }
    }

    fn outcome(
        claim: ClaimId,
        evidence: BTreeMap<&'static str, String>,
        counterexample: Option<String>,
    ) -> Self {
        TheoremVerdict {
            claim,
            applicable: true,
            verified: counterexample.is_none(),
            evidence,
            counterexample,
        }
    }

    /// True iff the claim applies and was falsified.
    pub fn falsified(&self) -> bool {
        self.applicable && !self.verified
    }
}

/// Hypotheses shared by the claims, computed once per loop.
#[derive(Clone, Debug)]
pub struct LoopFacts {
    pub associative: bool,
    pub moufang: bool,
    pub cc: bool,
    pub nucleus: ElementSet,
    pub nuclear_commutators: bool,
}

impl LoopFacts {
    pub fn of(t: &LoopTable) -> Self {
        let nuc = nucleus(t, NucleusKind::Full);
        LoopFacts {
            associative: is_associative(t).holds,
            moufang: is_moufang(t, MoufangVariant::One).holds,
            cc: is_cc(t).holds,
            nuclear_commutators: first_non_nuclear_commutator(t, &nuc).is_none(),
            nucleus: nuc,
        }
    }
}

fn first_non_nuclear_commutator(t: &LoopTable, nuc: &ElementSet) -> Option<(Element, Element)> {
    let n = t.order();
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| !nuc.contains(commutator(t, x, y)))
}

/// Every commutator `[x, y]` lies in the nucleus. Since the nucleus is a
/// subloop, this is the same as the commutator subloop lying in it.
pub fn has_nuclear_commutators(t: &LoopTable) -> bool {
    first_non_nuclear_commutator(t, &nucleus(t, NucleusKind::Full)).is_none()
}

fn bound_evidence(
    p: ExactFraction,
    per_loop: ExactFraction,
    bound: ExactFraction,
) -> BTreeMap<&'static str, String> {
    BTreeMap::from([
        ("p_assoc", p.to_string()),
        ("per_loop_bound", per_loop.to_string()),
        ("bound", bound.to_string()),
        ("attains_bound", (p == bound).to_string()),
        ("within_per_loop_bound", (p <= per_loop).to_string()),
    ])
}

pub fn verify_moufang_bound(t: &LoopTable) -> TheoremVerdict {
    verify_moufang_bound_with(t, &LoopFacts::of(t))
}

fn verify_moufang_bound_with(t: &LoopTable, f: &LoopFacts) -> TheoremVerdict {
    let claim = ClaimId::MoufangBound;
    if !(f.moufang && !f.associative && f.nuclear_commutators) {
        return TheoremVerdict::not_applicable(
            claim,
            "requires a nonassociative Moufang loop with nuclear commutators",
        );
    }
    let bound = ExactFraction::new(43, 64);
    let p = p_assoc(t);
    let ev = bound_evidence(p, moufang_bound_value(t), bound);
    let cex = (p > bound).then(|| format!("p_assoc = {p} exceeds {bound}"));
    TheoremVerdict::outcome(claim, ev, cex)
}

pub fn verify_cc_bound(t: &LoopTable) -> TheoremVerdict {
    verify_cc_bound_with(t, &LoopFacts::of(t))
}

fn verify_cc_bound_with(t: &LoopTable, f: &LoopFacts) -> TheoremVerdict {
    let claim = ClaimId::CcBound;
    if !(f.cc && !f.associative) {
        return TheoremVerdict::not_applicable(claim, "requires a nonassociative CC loop");
    }
    let bound = ExactFraction::new(7, 8);
    let p = p_assoc(t);
    let ev = bound_evidence(p, cc_bound_value(t), bound);
    let cex = (p > bound).then(|| format!("p_assoc = {p} exceeds {bound}"));
    TheoremVerdict::outcome(claim, ev, cex)
}

pub fn verify_index_corollary(t: &LoopTable) -> TheoremVerdict {
    verify_index_with(t, &LoopFacts::of(t))
}

fn verify_index_with(t: &LoopTable, f: &LoopFacts) -> TheoremVerdict {
    let claim = ClaimId::Index8;
    if !(f.moufang && !f.associative) {
        return TheoremVerdict::not_applicable(claim, "requires a nonassociative Moufang loop");
    }
    let classes = cosets(t, &f.nucleus, Side::Left).expect("the nucleus is a subloop");
    let mut ev = BTreeMap::from([
        ("nucleus", f.nucleus.to_string()),
        ("nucleus_size", f.nucleus.len().to_string()),
        ("coset_partition", classes.partition.to_string()),
    ]);
    let cex = match classes.index {
        Some(index) => {
            ev.insert("index", index.to_string());
            (index < 8).then(|| format!("index {index} < 8"))
        }
        None => Some("nucleus cosets do not partition the loop".to_string()),
    };
    TheoremVerdict::outcome(claim, ev, cex)
}

/// Contrapositive of the two-generator lemma: in a nonassociative Moufang
/// loop, no quotient by a normal subloop of the nucleus is generated by two
/// (or fewer) cosets.
pub fn verify_two_generator_lemma(t: &LoopTable) -> TheoremVerdict {
    verify_two_gen_with(t, &LoopFacts::of(t))
}

fn verify_two_gen_with(t: &LoopTable, f: &LoopFacts) -> TheoremVerdict {
    let claim = ClaimId::TwoGen;
    if !(f.moufang && !f.associative) {
        return TheoremVerdict::not_applicable(claim, "requires a nonassociative Moufang loop");
    }
    let mut checked = 0usize;
    let mut cex = None;
    for a in subloops_within(t, &f.nucleus) {
        if !is_normal(t, &a).unwrap_or(false) {
            continue;
        }
        let q = quotient(t, &a).expect("normal subloop");
        checked += 1;
        let k = q.table.order();
        let gen_pair = (0..k)
            .flat_map(|u| (u..k).map(move |v| (u, v)))
            .find(|&(u, v)| {
                subloop_closure(&q.table, &ElementSet::from_elements(k, [u, v])).len() == k
            });
        if let Some((u, v)) = gen_pair {
            cex = Some(format!(
                "G/A with A = {{{a}}} is generated by cosets {{{}}} and {{{}}}",
                q.cosets[u], q.cosets[v]
            ));
            break;
        }
    }
    let ev = BTreeMap::from([("normal_subloops_of_nucleus", checked.to_string())]);
    TheoremVerdict::outcome(claim, ev, cex)
}

/// Every trivial-associator triple generates an associative subloop, and
/// triviality survives permuting the triple and inverting any entry.
pub fn verify_moufang_theorem(t: &LoopTable) -> Result<TheoremVerdict> {
    verify_moufang_thm_with(t, &LoopFacts::of(t))
}

fn verify_moufang_thm_with(t: &LoopTable, f: &LoopFacts) -> Result<TheoremVerdict> {
    let claim = ClaimId::MoufangThm;
    let n = t.order();
    if n > crate::structure::DEFAULT_SUBLOOP_BOUND {
        return Err(LoopError::OrderTooLarge {
            order: n,
            max: crate::structure::DEFAULT_SUBLOOP_BOUND,
        });
    }
    if !f.moufang {
        return Ok(TheoremVerdict::not_applicable(
            claim,
            "requires a Moufang loop",
        ));
    }
    let e = t.identity();
    let inv = |x: Element| t.two_sided_inverse(x);
    let mut memo: HashMap<ElementSet, bool> = HashMap::new();
    let mut trivial = 0u64;
    let mut cex = None;
    'scan: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if associator(t, x, y, z) != e {
                    continue;
                }
                trivial += 1;
                let gen = subloop_closure(t, &ElementSet::from_elements(n, [x, y, z]));
                let assoc = *memo
                    .entry(gen.clone())
                    .or_insert_with(|| is_associative_subset(t, &gen));
                if !assoc {
                    cex = Some(format!("<{x}, {y}, {z}> = {{{gen}}} is not associative"));
                    break 'scan;
                }
                for (a, b, c) in [(x, z, y), (y, x, z), (y, z, x), (z, x, y), (z, y, x)] {
                    if associator(t, a, b, c) != e {
                        cex = Some(format!("[{x}, {y}, {z}] = 1 but [{a}, {b}, {c}] ≠ 1"));
                        break 'scan;
                    }
                }
                let inverted = [
                    inv(x).map(|i| (i, y, z)),
                    inv(y).map(|i| (x, i, z)),
                    inv(z).map(|i| (x, y, i)),
                ];
                for tr in inverted {
                    match tr {
                        Some((a, b, c)) if associator(t, a, b, c) == e => {}
                        Some((a, b, c)) => {
                            cex = Some(format!("[{x}, {y}, {z}] = 1 but [{a}, {b}, {c}] ≠ 1"));
                            break 'scan;
                        }
                        None => {
                            cex = Some(format!("no two-sided inverse in ({x}, {y}, {z})"));
                            break 'scan;
                        }
                    }
                }
            }
        }
    }
    let ev = BTreeMap::from([
        ("trivial_associator_triples", trivial.to_string()),
        ("distinct_generated_subloops", memo.len().to_string()),
    ]);
    Ok(TheoremVerdict::outcome(claim, ev, cex))
}

/// Subloop orders divide the loop order (Moufang and CC loops).
pub fn verify_lagrange(t: &LoopTable) -> Result<TheoremVerdict> {
    verify_lagrange_with(t, &LoopFacts::of(t))
}

fn verify_lagrange_with(t: &LoopTable, f: &LoopFacts) -> Result<TheoremVerdict> {
    let claim = ClaimId::Lagrange;
    let subs = all_subloops(t)?;
    if !(f.moufang || f.cc) {
        return Ok(TheoremVerdict::not_applicable(
            claim,
            "requires a Moufang or CC loop",
        ));
    }
    let n = t.order();
    let orders: std::collections::BTreeSet<usize> = subs.iter().map(|s| s.len()).collect();
    let max_proper = subs.iter().filter(|s| s.len() < n).map(|s| s.len()).max();
    let ev = BTreeMap::from([
        ("subloop_count", subs.len().to_string()),
        (
            "subloop_orders",
            orders
                .iter()
                .map(|o| o.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        ),
        ("largest_proper", max_proper.unwrap_or(0).to_string()),
    ]);
    let cex = subs
        .iter()
        .find(|s| !n.is_multiple_of(s.len()))
        .map(|s| format!("subloop {{{s}}} of order {} does not divide {n}", s.len()));
    Ok(TheoremVerdict::outcome(claim, ev, cex))
}

/// For every pair `(x, y)`: `L(x, y)` is a pseudo-automorphism with companion
/// `[y, x]`, `L(x, y)(z)·[z, y, x] = z`, its fixed points are `∂_{x,y}`, and
/// `∂_{x,y}` is a subloop.
///
/// Applies in full to Moufang loops with nuclear commutators. For CC loops
/// only the subloop property of `∂_{x,y}` is checked.
pub fn verify_fixed_point_lemma(t: &LoopTable) -> TheoremVerdict {
    verify_fixed_point_with(t, &LoopFacts::of(t))
}

fn verify_fixed_point_with(t: &LoopTable, f: &LoopFacts) -> TheoremVerdict {
    let claim = ClaimId::FixedPoint;
    let full = f.moufang && f.nuclear_commutators;
    if !full && !f.cc {
        return TheoremVerdict::not_applicable(
            claim,
            "requires a Moufang loop with nuclear commutators, or a CC loop",
        );
    }
    let n = t.order();
    let mut cex = None;
    'pairs: for x in 0..n {
        for y in 0..n {
            let d = partial_set(t, x, y);
            if !is_subloop(t, &d) {
                cex = Some(format!("∂({x},{y}) = {{{d}}} is not a subloop"));
                break 'pairs;
            }
            if !full {
                continue;
            }
            let l = pseudo_l(t, x, y);
            if !crate::structure::is_pseudo_automorphism(t, &l.map, l.companion) {
                cex = Some(format!(
                    "L({x},{y}) is not a pseudo-automorphism with companion {}",
                    l.companion
                ));
                break 'pairs;
            }
            if let Some(z) = (0..n).find(|&z| t.mul(l.map.apply(z), associator(t, z, y, x)) != z) {
                cex = Some(format!("L({x},{y})({z})·[{z},{y},{x}] ≠ {z}"));
                break 'pairs;
            }
            let fixed = ElementSet::from_elements(n, l.map.fixed_points());
            if fixed != d {
                cex = Some(format!(
                    "fixed points of L({x},{y}) are {{{fixed}}}, ∂({x},{y}) is {{{d}}}"
                ));
                break 'pairs;
            }
        }
    }
    let ev = BTreeMap::from([
        ("pairs", (n * n).to_string()),
        (
            "scope",
            if full { "full" } else { "subloop_only" }.to_string(),
        ),
    ]);
    TheoremVerdict::outcome(claim, ev, cex)
}

/// Runs the requested claims, sharing hypothesis checks.
pub fn verify_claims(t: &LoopTable, claims: &[ClaimId]) -> Result<Vec<TheoremVerdict>> {
    let facts = LoopFacts::of(t);
    claims.iter().map(|&c| verify_with(t, &facts, c)).collect()
}

pub fn verify_with(t: &LoopTable, facts: &LoopFacts, claim: ClaimId) -> Result<TheoremVerdict> {
    Ok(match claim {
        ClaimId::MoufangBound => verify_moufang_bound_with(t, facts),
        ClaimId::CcBound => verify_cc_bound_with(t, facts),
        ClaimId::Index8 => verify_index_with(t, facts),
        ClaimId::TwoGen => verify_two_gen_with(t, facts),
        ClaimId::MoufangThm => verify_moufang_thm_with(t, facts)?,
        ClaimId::Lagrange => verify_lagrange_with(t, facts)?,
        ClaimId::FixedPoint => verify_fixed_point_with(t, facts),
    })
}
