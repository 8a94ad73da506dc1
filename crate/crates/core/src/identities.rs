//! Decidable identity checks over a whole loop.
//!
//! Every check is a scan of one [`Law`] over all pairs or triples in
//! lexicographic order. A failing verdict carries the lexicographically
//! smallest violating tuple, independent of how the scan is parallelised.

use rayon::prelude::*;
use serde::Serialize;

use crate::structure::{is_associative_subset, subloop_closure, ElementSet};
use crate::table::{Element, LoopTable};

/// Orders at or above which triple scans are split across threads.
const PARALLEL_SCAN_ORDER: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    /// `(xy)z = x(yz)`
    Associative,
    /// `z(x(zy)) = ((zx)z)y`
    Moufang1,
    /// `((xz)y)z = x(z(yz))`
    Moufang2,
    /// `(zx)(yz) = (z(xy))z`
    Moufang3,
    /// `z(xy) = R_z⁻¹(zx)·(zy)`
    Cc4,
    /// `(xy)z = (xz)·L_z⁻¹(yz)`
    Cc5,
    /// `(xy)y = x(yy)`
    RightAlternative,
    /// `(xx)y = x(xy)`
    LeftAlternative,
    /// `⟨x, y⟩` is associative
    Diassociative,
}

impl Law {
    pub fn arity(self) -> usize {
        match self {
            Law::RightAlternative | Law::LeftAlternative | Law::Diassociative => 2,
            _ => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Law::Associative => "associative",
            Law::Moufang1 => "moufang(1)",
            Law::Moufang2 => "moufang(2)",
            Law::Moufang3 => "moufang(3)",
            Law::Cc4 => "cc(4)",
            Law::Cc5 => "cc(5)",
            Law::RightAlternative => "right_alternative",
            Law::LeftAlternative => "left_alternative",
            Law::Diassociative => "diassociative",
        }
    }

    /// Evaluates the law at one tuple `(x, y[, z])`.
    pub fn holds_at(self, t: &LoopTable, args: &[Element]) -> bool {
        let m = |a, b| t.mul(a, b);
        match self {
            Law::Associative => {
                let (x, y, z) = (args[0], args[1], args[2]);
                m(m(x, y), z) == m(x, m(y, z))
            }
            Law::Moufang1 => {
                let (x, y, z) = (args[0], args[1], args[2]);
                m(z, m(x, m(z, y))) == m(m(m(z, x), z), y)
            }
            Law::Moufang2 => {
                let (x, y, z) = (args[0], args[1], args[2]);
                m(m(m(x, z), y), z) == m(x, m(z, m(y, z)))
            }
            Law::Moufang3 => {
                let (x, y, z) = (args[0], args[1], args[2]);
                m(m(z, x), m(y, z)) == m(m(z, m(x, y)), z)
            }
            Law::Cc4 => {
                let (x, y, z) = (args[0], args[1], args[2]);
                m(z, m(x, y)) == m(t.right_div(z, m(z, x)), m(z, y))
            }
            Law::Cc5 => {
                let (x, y, z) = (args[0], args[1], args[2]);
                m(m(x, y), z) == m(m(x, z), t.left_div(z, m(y, z)))
            }
            Law::RightAlternative => {
                let (x, y) = (args[0], args[1]);
                m(m(x, y), y) == m(x, m(y, y))
            }
            Law::LeftAlternative => {
                let (x, y) = (args[0], args[1]);
                m(m(x, x), y) == m(x, m(x, y))
            }
            Law::Diassociative => {
                let gens = ElementSet::from_elements(t.order(), [args[0], args[1]]);
                is_associative_subset(t, &subloop_closure(t, &gens))
            }
        }
    }

    /// Lexicographically smallest violating tuple, if any.
    pub fn first_violation(self, t: &LoopTable) -> Option<Vec<Element>> {
        let n = t.order();
        let scan_x = |x: Element| -> Option<Vec<Element>> {
            if self.arity() == 2 {
                (0..n)
                    .find(|&y| !self.holds_at(t, &[x, y]))
                    .map(|y| vec![x, y])
            } else {
                (0..n).find_map(|y| {
                    (0..n)
                        .find(|&z| !self.holds_at(t, &[x, y, z]))
                        .map(|z| vec![x, y, z])
                })
            }
        };
        if n >= PARALLEL_SCAN_ORDER {
            (0..n).into_par_iter().find_map_first(scan_x)
        } else {
            (0..n).find_map(scan_x)
        }
    }
}

/// A concrete tuple at which a law fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub law: Law,
    pub elements: Vec<Element>,
}

impl Witness {
    /// Re-evaluates the law at the recorded tuple; true iff it really fails.
    pub fn is_genuine(&self, t: &LoopTable) -> bool {
        self.elements.len() == self.law.arity() && !self.law.holds_at(t, &self.elements)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityVerdict {
    pub name: &'static str,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl IdentityVerdict {
    fn check(name: &'static str, t: &LoopTable, laws: &[Law]) -> Self {
        for &law in laws {
            if let Some(elements) = law.first_violation(t) {
                return IdentityVerdict {
                    name,
                    holds: false,
                    witness: Some(Witness { law, elements }),
                };
            }
        }
        IdentityVerdict {
            name,
            holds: true,
            witness: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MoufangVariant {
    #[default]
    One,
    Two,
    Three,
    All,
}

pub fn is_associative(t: &LoopTable) -> IdentityVerdict {
    IdentityVerdict::check("associative", t, &[Law::Associative])
}

pub fn is_moufang(t: &LoopTable, variant: MoufangVariant) -> IdentityVerdict {
    match variant {
        MoufangVariant::One => IdentityVerdict::check("moufang(1)", t, &[Law::Moufang1]),
        MoufangVariant::Two => IdentityVerdict::check("moufang(2)", t, &[Law::Moufang2]),
        MoufangVariant::Three => IdentityVerdict::check("moufang(3)", t, &[Law::Moufang3]),
        MoufangVariant::All => IdentityVerdict::check(
            "moufang(all)",
            t,
            &[Law::Moufang1, Law::Moufang2, Law::Moufang3],
        ),
    }
}

pub fn is_cc(t: &LoopTable) -> IdentityVerdict {
    IdentityVerdict::check("cc", t, &[Law::Cc4, Law::Cc5])
}

pub fn is_alternative(t: &LoopTable) -> IdentityVerdict {
    IdentityVerdict::check(
        "alternative",
        t,
        &[Law::RightAlternative, Law::LeftAlternative],
    )
}

pub fn is_diassociative(t: &LoopTable) -> IdentityVerdict {
    IdentityVerdict::check("diassociative", t, &[Law::Diassociative])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> LoopTable {
        let rows: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        LoopTable::from_rows(&rows).unwrap()
    }

    // The unique-up-to-isomorphism nonassociative loop shape of order 5 used
    // for hand checks: a Latin square with identity 0 that is not cyclic.
    fn order5_nonassociative() -> LoopTable {
        LoopTable::from_rows(&[
            [0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0],
        ])
        .unwrap()
    }

    #[test]
    fn groups_satisfy_everything() {
        let t = cyclic(6);
        assert!(is_associative(&t).holds);
        for v in [
            MoufangVariant::One,
            MoufangVariant::Two,
            MoufangVariant::Three,
            MoufangVariant::All,
        ] {
            assert!(is_moufang(&t, v).holds);
        }
        assert!(is_cc(&t).holds);
        assert!(is_alternative(&t).holds);
        assert!(is_diassociative(&t).holds);
    }

    #[test]
    fn failing_verdicts_carry_genuine_minimal_witness() {
        let t = order5_nonassociative();
        let v = is_associative(&t);
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert!(w.is_genuine(&t));
        // nothing lexicographically smaller fails
        let first = (0..5)
            .flat_map(|x| (0..5).flat_map(move |y| (0..5).map(move |z| vec![x, y, z])))
            .find(|tr| !Law::Associative.holds_at(&t, tr))
            .unwrap();
        assert_eq!(w.elements, first);

        let alt = is_alternative(&t);
        assert!(!alt.holds);
        assert!(alt.witness.unwrap().is_genuine(&t));
    }

    #[test]
    fn witness_fields_match_law_arity() {
        let t = order5_nonassociative();
        for law in [Law::Moufang1, Law::Cc4, Law::LeftAlternative] {
            if let Some(e) = law.first_violation(&t) {
                assert_eq!(e.len(), law.arity());
            }
        }
    }
}
