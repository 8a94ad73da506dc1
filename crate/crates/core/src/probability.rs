//! Exact association and commutation probabilities.
//!
//! Counts are exact integers; nothing here passes through floating point
//! except [`ExactFraction::approx`], which exists only for display.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::LoopError;
use crate::structure::{adjoint, nucleus, trailing_partial_set, ElementSet, NucleusKind};
use crate::table::LoopTable;

/// A reduced non-negative fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExactFraction {
    num: u64,
    den: u64,
}

impl ExactFraction {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let g = num.gcd(&den);
        ExactFraction {
            num: num / g,
            den: den / g,
        }
    }

    pub const ZERO: ExactFraction = ExactFraction { num: 0, den: 1 };
    pub const ONE: ExactFraction = ExactFraction { num: 1, den: 1 };

    pub fn numerator(self) -> u64 {
        self.num
    }

    pub fn denominator(self) -> u64 {
        self.den
    }

    /// Approximate decimal value, for rendering only.
    pub fn approx(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn checked_add(self, other: Self) -> Option<Self> {
        let l = self.den.lcm(&other.den);
        let a = self.num.checked_mul(l / self.den)?;
        let b = other.num.checked_mul(l / other.den)?;
        Some(Self::new(a.checked_add(b)?, l))
    }

    pub fn checked_mul(self, other: Self) -> Option<Self> {
        // cross-reduce first to keep intermediates small
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let num = (self.num / g1.max(1)).checked_mul(other.num / g2.max(1))?;
        let den = (self.den / g2.max(1)).checked_mul(other.den / g1.max(1))?;
        Some(Self::new(num, den))
    }

    /// Rendering as `p/q ≈ d`.
    pub fn display_with_approx(self) -> String {
        format!("{self} ≈ {:.6}", self.approx())
    }
}

impl std::ops::Add for ExactFraction {
    type Output = ExactFraction;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).expect("fraction overflow")
    }
}

impl std::ops::Mul for ExactFraction {
    type Output = ExactFraction;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).expect("fraction overflow")
    }
}

impl Ord for ExactFraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for ExactFraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExactFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for ExactFraction {
    type Err = LoopError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LoopError::InvalidFraction(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num: u64 = n.parse().map_err(|_| bad())?;
        let den: u64 = d.parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        Ok(ExactFraction::new(num, den))
    }
}

fn cube(n: usize) -> u64 {
    (n as u64).pow(3)
}

/// Number of triples `(x, y, z)` with `(xy)z = x(yz)`.
pub fn associating_triples(t: &LoopTable) -> u64 {
    let n = t.order();
    let per_x = |x: usize| -> u64 {
        let mut count = 0;
        for y in 0..n {
            let xy = t.mul(x, y);
            for z in 0..n {
                if t.mul(xy, z) == t.mul(x, t.mul(y, z)) {
                    count += 1;
                }
            }
        }
        count
    };
    if n >= 16 {
        (0..n).into_par_iter().map(per_x).sum()
    } else {
        (0..n).map(per_x).sum()
    }
}

pub fn p_assoc(t: &LoopTable) -> ExactFraction {
    ExactFraction::new(associating_triples(t), cube(t.order()))
}

/// Number of pairs `(x, y)` with `xy = yx`.
pub fn commuting_pairs(t: &LoopTable) -> u64 {
    let n = t.order();
    let mut count = 0;
    for x in 0..n {
        for y in 0..n {
            if t.mul(x, y) == t.mul(y, x) {
                count += 1;
            }
        }
    }
    count
}

pub fn p_comm(t: &LoopTable) -> ExactFraction {
    let n = t.order() as u64;
    ExactFraction::new(commuting_pairs(t), n * n)
}

/// Associating triples counted through three disjoint cases:
/// 1. `x ∈ 𝔑`;
/// 2. `x ∉ 𝔑` and `y ∈ {x}′`;
/// 3. `x ∉ 𝔑`, `y ∉ {x}′`, and `[x, y, z] = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TripleCountBreakdown {
    pub case1: u64,
    pub case2: u64,
    pub case3: u64,
    pub total: u64,
}

impl TripleCountBreakdown {
    pub fn associating(&self) -> u64 {
        self.case1 + self.case2 + self.case3
    }

    pub fn fraction(&self) -> ExactFraction {
        ExactFraction::new(self.associating(), self.total)
    }
}

/// Counts associating triples through nucleus membership, adjoint sets, and
/// per-pair associating sets instead of a direct triple scan.
pub fn p_assoc_decomposed(t: &LoopTable) -> (TripleCountBreakdown, ExactFraction) {
    let n = t.order();
    let nuc = nucleus(t, NucleusKind::Full);
    let n2 = (n * n) as u64;
    let case1 = nuc.len() as u64 * n2;

    let outside: Vec<usize> = t.elements().filter(|&x| !nuc.contains(x)).collect();
    let per_x = |&x: &usize| -> (u64, u64) {
        let single = ElementSet::from_elements(n, [x]);
        let adj = adjoint(t, &single).expect("non-empty");
        let case2 = adj.len() as u64 * n as u64;
        let case3 = t
            .elements()
            .filter(|&y| !adj.contains(y))
            .map(|y| trailing_partial_set(t, x, y).len() as u64)
            .sum();
        (case2, case3)
    };
    let (case2, case3) = if n >= 16 {
        outside
            .par_iter()
            .map(per_x)
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    } else {
        outside
            .iter()
            .map(per_x)
            .fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    };
    let breakdown = TripleCountBreakdown {
        case1,
        case2,
        case3,
        total: cube(n),
    };
    (breakdown, breakdown.fraction())
}

/// `|𝔑|/n · 3/8 + 5/8`.
pub fn moufang_bound_value(t: &LoopTable) -> ExactFraction {
    let ratio = ExactFraction::new(nucleus(t, NucleusKind::Full).len() as u64, t.order() as u64);
    moufang_bound_for_ratio(ratio)
}

pub fn moufang_bound_for_ratio(nucleus_ratio: ExactFraction) -> ExactFraction {
    nucleus_ratio * ExactFraction::new(3, 8) + ExactFraction::new(5, 8)
}

/// `|𝔑|/n · 1/4 + 3/4`.
pub fn cc_bound_value(t: &LoopTable) -> ExactFraction {
    let ratio = ExactFraction::new(nucleus(t, NucleusKind::Full).len() as u64, t.order() as u64);
    cc_bound_for_ratio(ratio)
}

pub fn cc_bound_for_ratio(nucleus_ratio: ExactFraction) -> ExactFraction {
    nucleus_ratio * ExactFraction::new(1, 4) + ExactFraction::new(3, 4)
}
