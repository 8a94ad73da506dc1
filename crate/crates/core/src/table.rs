//! Cayley tables: raw magmas, validation to quasigroups and loops, and the
//! elementary operations every other module builds on.
//!
//! Elements are the integers `0..n`. The identity of a loop is detected, not
//! assumed to sit at index 0.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LoopError, Result};
use crate::perm::Permutation;

pub type Element = usize;

/// An `n × n` table closed over `0..n`, with no further structure assumed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MagmaTable {
    order: usize,
    products: Vec<Element>,
}

impl MagmaTable {
    /// Builds a table from row-major products.
    pub fn new(order: usize, products: Vec<Element>) -> Result<Self> {
        if order == 0 {
            return Err(LoopError::EmptyTable);
        }
        if products.len() != order * order {
            return Err(LoopError::ShapeMismatch {
                expected: order * order,
                found: products.len(),
            });
        }
        if let Some(pos) = products.iter().position(|&v| v >= order) {
            return Err(LoopError::OutOfRangeEntry {
                row: pos / order,
                col: pos % order,
                value: products[pos],
                order,
            });
        }
        Ok(MagmaTable { order, products })
    }

    pub fn from_rows<R: AsRef<[Element]>>(rows: &[R]) -> Result<Self> {
        let order = rows.len();
        let mut products = Vec::with_capacity(order * order);
        for row in rows {
            let row = row.as_ref();
            if row.len() != order {
                return Err(LoopError::ShapeMismatch {
                    expected: order,
                    found: row.len(),
                });
            }
            products.extend_from_slice(row);
        }
        Self::new(order, products)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, a: Element, b: Element) -> Element {
        self.products[a * self.order + b]
    }

    pub fn row(&self, a: Element) -> &[Element] {
        &self.products[a * self.order..(a + 1) * self.order]
    }

    pub fn products(&self) -> &[Element] {
        &self.products
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Element]> {
        self.products.chunks(self.order)
    }

    /// First Latin-square violation in row-major scan order, if any.
    pub fn latin_defect(&self) -> Option<LatinDefect> {
        let n = self.order;
        for r in 0..n {
            let mut seen = vec![false; n];
            for &v in self.row(r) {
                if std::mem::replace(&mut seen[v], true) {
                    return Some(LatinDefect::RowRepeat { row: r, value: v });
                }
            }
        }
        for c in 0..n {
            let mut seen = vec![false; n];
            for r in 0..n {
                let v = self.get(r, c);
                if std::mem::replace(&mut seen[v], true) {
                    return Some(LatinDefect::ColumnRepeat { col: c, value: v });
                }
            }
        }
        None
    }

    /// The unique two-sided identity, if one exists.
    pub fn find_identity(&self) -> Option<Element> {
        let n = self.order;
        (0..n).find(|&e| (0..n).all(|x| self.get(e, x) == x && self.get(x, e) == x))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Magma,
    Quasigroup,
    Loop,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Magma => "magma",
            Classification::Quasigroup => "quasigroup",
            Classification::Loop => "loop",
        })
    }
}

/// Why a table is not a loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatinDefect {
    RowRepeat { row: usize, value: usize },
    ColumnRepeat { col: usize, value: usize },
    NoIdentity,
}

impl fmt::Display for LatinDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatinDefect::RowRepeat { row, value } => write!(f, "row {row} repeats value {value}"),
            LatinDefect::ColumnRepeat { col, value } => {
                write!(f, "column {col} repeats value {value}")
            }
            LatinDefect::NoIdentity => write!(f, "no two-sided identity element"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Validation {
    pub classification: Classification,
    pub defect: Option<LatinDefect>,
    pub loop_table: Option<LoopTable>,
}

pub fn validate(table: MagmaTable) -> Validation {
    if let Some(defect) = table.latin_defect() {
        return Validation {
            classification: Classification::Magma,
            defect: Some(defect),
            loop_table: None,
        };
    }
    match table.find_identity() {
        Some(identity) => Validation {
            classification: Classification::Loop,
            defect: None,
            loop_table: Some(LoopTable::from_latin(table, identity)),
        },
        None => Validation {
            classification: Classification::Quasigroup,
            defect: Some(LatinDefect::NoIdentity),
            loop_table: None,
        },
    }
}

/// A validated loop. Division tables are precomputed at construction.
#[derive(Clone, Debug)]
pub struct LoopTable {
    base: MagmaTable,
    identity: Element,
    left_div: Vec<Element>,
    right_div: Vec<Element>,
}

impl PartialEq for LoopTable {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
    }
}

impl Eq for LoopTable {}

impl std::hash::Hash for LoopTable {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.base.hash(state);
    }
}

impl LoopTable {
    fn from_latin(base: MagmaTable, identity: Element) -> Self {
        let n = base.order();
        let mut left_div = vec![0; n * n];
        let mut right_div = vec![0; n * n];
        for a in 0..n {
            for x in 0..n {
                let b = base.get(a, x);
                left_div[a * n + b] = x;
                let b = base.get(x, a);
                right_div[a * n + b] = x;
            }
        }
        LoopTable {
            base,
            identity,
            left_div,
            right_div,
        }
    }

    pub fn new(table: MagmaTable) -> Result<Self> {
        let v = validate(table);
        match v.loop_table {
            Some(t) => Ok(t),
            None => Err(LoopError::NotALoop(
                v.defect.unwrap_or(LatinDefect::NoIdentity),
            )),
        }
    }

    pub fn from_rows<R: AsRef<[Element]>>(rows: &[R]) -> Result<Self> {
        Self::new(MagmaTable::from_rows(rows)?)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.base.order()
    }

    #[inline]
    pub fn identity(&self) -> Element {
        self.identity
    }

    pub fn magma(&self) -> &MagmaTable {
        &self.base
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.order()
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.base.get(a, b)
    }

    /// The unique `x` with `a·x = b`.
    #[inline]
    pub fn left_div(&self, a: Element, b: Element) -> Element {
        self.left_div[a * self.order() + b]
    }

    /// The unique `x` with `x·a = b`.
    #[inline]
    pub fn right_div(&self, a: Element, b: Element) -> Element {
        self.right_div[a * self.order() + b]
    }

    /// Left and right translations `L_x: y ↦ xy`, `R_x: y ↦ yx`.
    pub fn translations(&self, x: Element) -> (Permutation, Permutation) {
        let left = self.elements().map(|y| self.mul(x, y)).collect();
        let right = self.elements().map(|y| self.mul(y, x)).collect();
        (
            Permutation::from_images(left).expect("Latin row"),
            Permutation::from_images(right).expect("Latin column"),
        )
    }

    pub fn two_sided_inverse(&self, x: Element) -> Option<Element> {
        let e = self.identity;
        let right_inv = self.left_div(x, e);
        let left_inv = self.right_div(x, e);
        (right_inv == left_inv).then_some(right_inv)
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a + 1..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Relabels the loop by the bijection `f`: the result satisfies
    /// `f(a)·f(b) = f(a·b)`.
    pub fn relabel(&self, f: &Permutation) -> LoopTable {
        let n = self.order();
        let mut products = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                products[f.apply(a) * n + f.apply(b)] = f.apply(self.mul(a, b));
            }
        }
        let base = MagmaTable { order: n, products };
        LoopTable::from_latin(base, f.apply(self.identity))
    }

    /// The element's left-power period: the least `k ≥ 1` with `x^k = e`
    /// (powers taken as `((x·x)·x)…`), or 0 if the sequence never returns.
    pub fn left_power_period(&self, x: Element) -> usize {
        let mut p = x;
        for k in 1..=self.order() {
            if p == self.identity {
                return k;
            }
            p = self.mul(p, x);
        }
        0
    }

    /// Isomorphism invariants of an element, used to prune bijection search.
    fn element_profile(&self, x: Element) -> (usize, usize, bool) {
        let commuting = self
            .elements()
            .filter(|&y| self.mul(x, y) == self.mul(y, x))
            .count();
        let sq = self.mul(x, x);
        (
            self.left_power_period(x),
            commuting,
            self.two_sided_inverse(x).is_some() && sq == self.identity,
        )
    }
}

/// Searches for an isomorphism `f: a → b`, i.e. a bijection with
/// `f(x·y) = f(x)·f(y)`.
///
/// Backtracks over images of a greedy generating sequence of `a`; each partial
/// assignment is extended over the generated subloop and rejected on the first
/// inconsistent product. Candidate images must share the element profile.
pub fn isomorphic(a: &LoopTable, b: &LoopTable) -> Result<Option<Permutation>> {
    let n = a.order();
    if n != b.order() {
        return Err(LoopError::OrderMismatch {
            left: n,
            right: b.order(),
        });
    }
    let prof_a: Vec<_> = a.elements().map(|x| a.element_profile(x)).collect();
    let prof_b: Vec<_> = b.elements().map(|x| b.element_profile(x)).collect();
    {
        let mut sa = prof_a.clone();
        let mut sb = prof_b.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return Ok(None);
        }
    }

    let gens = greedy_generators(a);
    let mut state = MapState::new(a, b);
    state.map(a.identity(), b.identity());
    if !state.close() {
        return Ok(None);
    }
    if search(&gens, 0, &prof_a, &prof_b, &mut state) {
        let f = Permutation::from_images(state.fwd.iter().map(|v| v.unwrap()).collect())
            .expect("complete bijection");
        return Ok(Some(f));
    }
    Ok(None)
}

fn greedy_generators(t: &LoopTable) -> Vec<Element> {
    let n = t.order();
    let mut inside = vec![false; n];
    inside[t.identity()] = true;
    let mut members = vec![t.identity()];
    let mut gens = Vec::new();
    for x in 0..n {
        if inside[x] {
            continue;
        }
        gens.push(x);
        inside[x] = true;
        members.push(x);
        // close under multiplication; finite, so this is the generated subloop
        let mut i = 0;
        while i < members.len() {
            for j in 0..=i {
                for (u, v) in [(members[i], members[j]), (members[j], members[i])] {
                    let w = t.mul(u, v);
                    if !inside[w] {
                        inside[w] = true;
                        members.push(w);
                    }
                }
            }
            i += 1;
        }
    }
    gens
}

struct MapState<'a> {
    a: &'a LoopTable,
    b: &'a LoopTable,
    fwd: Vec<Option<Element>>,
    used: Vec<bool>,
    mapped: Vec<Element>,
    checked: usize,
}

impl<'a> MapState<'a> {
    fn new(a: &'a LoopTable, b: &'a LoopTable) -> Self {
        let n = a.order();
        MapState {
            a,
            b,
            fwd: vec![None; n],
            used: vec![false; n],
            mapped: Vec::with_capacity(n),
            checked: 0,
        }
    }

    fn map(&mut self, x: Element, y: Element) -> bool {
        match self.fwd[x] {
            Some(z) => z == y,
            None if self.used[y] => false,
            None => {
                self.fwd[x] = Some(y);
                self.used[y] = true;
                self.mapped.push(x);
                true
            }
        }
    }

    /// Extends the map over all products of mapped elements.
    fn close(&mut self) -> bool {
        while self.checked < self.mapped.len() {
            let i = self.checked;
            for j in 0..=i {
                let (u, v) = (self.mapped[i], self.mapped[j]);
                for (p, q) in [(u, v), (v, u)] {
                    let img = self.b.mul(self.fwd[p].unwrap(), self.fwd[q].unwrap());
                    if !self.map(self.a.mul(p, q), img) {
                        return false;
                    }
                }
            }
            self.checked += 1;
        }
        true
    }

    fn snapshot(&self) -> (usize, usize) {
        (self.mapped.len(), self.checked)
    }

    fn rollback(&mut self, (len, checked): (usize, usize)) {
        while self.mapped.len() > len {
            let x = self.mapped.pop().unwrap();
            let y = self.fwd[x].take().unwrap();
            self.used[y] = false;
        }
        self.checked = checked;
    }
}

fn search(
    gens: &[Element],
    depth: usize,
    prof_a: &[(usize, usize, bool)],
    prof_b: &[(usize, usize, bool)],
    state: &mut MapState<'_>,
) -> bool {
    if depth == gens.len() {
        return state.mapped.len() == state.a.order();
    }
    let g = gens[depth];
    if state.fwd[g].is_some() {
        return search(gens, depth + 1, prof_a, prof_b, state);
    }
    for y in 0..state.b.order() {
        if state.used[y] || prof_b[y] != prof_a[g] {
            continue;
        }
        let snap = state.snapshot();
        if state.map(g, y) && state.close() && search(gens, depth + 1, prof_a, prof_b, state) {
            return true;
        }
        state.rollback(snap);
    }
    false
}
