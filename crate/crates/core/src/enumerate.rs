//! Exhaustive enumeration of small loops.
//!
//! Tables are normalized: element 0 is the identity, so row 0 and column 0 are
//! fixed. Remaining cells are filled row-major with candidate sets kept as
//! row/column bitmasks, values tried in increasing order, so completed tables
//! appear in lexicographic order.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LoopError, Result};
use crate::identities::{is_associative, is_cc, is_moufang, Law, MoufangVariant};
use crate::perm::Permutation;
use crate::probability::{p_assoc, ExactFraction};
use crate::table::{LoopTable, MagmaTable};
use crate::theorems::has_nuclear_commutators;

/// Largest order accepted without a pruning filter.
pub const MAX_UNFILTERED_ORDER: usize = 8;
/// Largest order accepted at all.
pub const MAX_ORDER: usize = 16;
/// From this order on, the Moufang filter prunes partial tables.
pub const INCREMENTAL_MOUFANG_ORDER: usize = 7;

const UNSET: u8 = u8::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Filter {
    Moufang,
    Cc,
    Nonassociative,
    NuclearCommutators,
}

impl Filter {
    pub const ALL: [Filter; 4] = [
        Filter::Moufang,
        Filter::Cc,
        Filter::Nonassociative,
        Filter::NuclearCommutators,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Filter::Moufang => "moufang",
            Filter::Cc => "cc",
            Filter::Nonassociative => "nonassociative",
            Filter::NuclearCommutators => "nuclear_commutators",
        }
    }

    pub fn accepts(self, t: &LoopTable) -> bool {
        match self {
            Filter::Moufang => is_moufang(t, MoufangVariant::One).holds,
            Filter::Cc => is_cc(t).holds,
            Filter::Nonassociative => !is_associative(t).holds,
            Filter::NuclearCommutators => has_nuclear_commutators(t),
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Filter {
    type Err = LoopError;

    fn from_str(s: &str) -> Result<Self> {
        Filter::ALL
            .into_iter()
            .find(|f| f.id() == s.trim())
            .ok_or_else(|| LoopError::UnknownFilter(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationJob {
    pub order: usize,
    pub filters: Vec<Filter>,
    pub up_to_iso: bool,
    pub limit: Option<usize>,
}

impl EnumerationJob {
    pub fn new(order: usize) -> Self {
        EnumerationJob {
            order,
            filters: Vec::new(),
            up_to_iso: false,
            limit: None,
        }
    }

    pub fn filter(mut self, f: Filter) -> Self {
        self.filters.push(f);
        self
    }

    pub fn up_to_iso(mut self, yes: bool) -> Self {
        self.up_to_iso = yes;
        self
    }

    pub fn limit(mut self, k: usize) -> Self {
        self.limit = Some(k);
        self
    }

    fn check(&self) -> Result<()> {
        let n = self.order;
        if n == 0 {
            return Err(LoopError::InvalidOrder(0));
        }
        let prunes = self.prunes_moufang();
        if n > MAX_ORDER || (n > MAX_UNFILTERED_ORDER && !prunes) {
            return Err(LoopError::OrderTooLarge {
                order: n,
                max: if prunes {
                    MAX_ORDER
                } else {
                    MAX_UNFILTERED_ORDER
                },
            });
        }
        Ok(())
    }

    fn prunes_moufang(&self) -> bool {
        self.order >= INCREMENTAL_MOUFANG_ORDER && self.filters.contains(&Filter::Moufang)
    }
}

/// How many tables survived each stage.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EnumerationSummary {
    /// Completed normalized tables produced by the search.
    pub searched: u64,
    /// Survivors after each filter, in job order.
    pub after_filter: Vec<(Filter, u64)>,
    /// Survivors of isomorphism rejection, when requested.
    pub iso_classes: Option<u64>,
    pub emitted: u64,
}

impl EnumerationSummary {
    fn merge(&mut self, other: &EnumerationSummary) {
        self.searched += other.searched;
        if self.after_filter.is_empty() {
            self.after_filter = other.after_filter.clone();
        } else {
            for (a, b) in self.after_filter.iter_mut().zip(&other.after_filter) {
                a.1 += b.1;
            }
        }
        self.iso_classes = match (self.iso_classes, other.iso_classes) {
            (Some(a), Some(b)) => Some(a + b),
            (a, b) => a.or(b),
        };
        self.emitted += other.emitted;
    }
}

impl fmt::Display for EnumerationSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "searched={}", self.searched)?;
        for (flt, k) in &self.after_filter {
            write!(f, " {flt}={k}")?;
        }
        if let Some(k) = self.iso_classes {
            write!(f, " up_to_iso={k}")?;
        }
        write!(f, " emitted={}", self.emitted)
    }
}

/// Partial normalized table with row/column usage masks.
#[derive(Clone)]
struct Partial {
    n: usize,
    cells: Vec<u8>,
    row_used: Vec<u32>,
    col_used: Vec<u32>,
}

impl Partial {
    fn new(n: usize) -> Self {
        let mut p = Partial {
            n,
            cells: vec![UNSET; n * n],
            row_used: vec![0; n],
            col_used: vec![0; n],
        };
        for i in 0..n {
            p.set(0, i, i);
            if i > 0 {
                p.set(i, 0, i);
            }
        }
        p
    }

    #[inline]
    fn set(&mut self, r: usize, c: usize, v: usize) {
        self.cells[r * self.n + c] = v as u8;
        self.row_used[r] |= 1 << v;
        self.col_used[c] |= 1 << v;
    }

    #[inline]
    fn unset(&mut self, r: usize, c: usize, v: usize) {
        self.cells[r * self.n + c] = UNSET;
        self.row_used[r] &= !(1 << v);
        self.col_used[c] &= !(1 << v);
    }

    #[inline]
    fn get(&self, a: usize, b: usize) -> Option<usize> {
        let v = self.cells[a * self.n + b];
        (v != UNSET).then_some(v as usize)
    }

    /// False iff some Moufang consequence fails on a fully determined tuple:
    /// the inverse properties, flexibility, the alternative laws, or one of the
    /// three Moufang identities.
    fn moufang_consistent(&self) -> bool {
        let n = self.n;
        let m = |a, b| self.get(a, b);
        // inverse properties: x⁻¹(xy) = y and (yx)x⁻¹ = y
        for x in 1..n {
            let Some(inv) = (1..n).find(|&w| m(x, w) == Some(0)) else {
                continue;
            };
            for y in 1..n {
                if let Some(l) = m(x, y).and_then(|xy| m(inv, xy)) {
                    if l != y {
                        return false;
                    }
                }
                if let Some(r) = m(y, x).and_then(|yx| m(yx, inv)) {
                    if r != y {
                        return false;
                    }
                }
            }
        }
        for x in 1..n {
            for y in 1..n {
                // flexibility
                if let (Some(l), Some(r)) = (
                    m(x, y).and_then(|xy| m(xy, x)),
                    m(y, x).and_then(|yx| m(x, yx)),
                ) {
                    if l != r {
                        return false;
                    }
                }
                // alternative laws
                if let (Some(xy), Some(yy)) = (m(x, y), m(y, y)) {
                    if let (Some(l), Some(r)) = (m(xy, y), m(x, yy)) {
                        if l != r {
                            return false;
                        }
                    }
                }
                if let (Some(xx), Some(xy)) = (m(x, x), m(x, y)) {
                    if let (Some(l), Some(r)) = (m(xx, y), m(x, xy)) {
                        if l != r {
                            return false;
                        }
                    }
                }
                for z in 1..n {
                    // z(x(zy)) = ((zx)z)y
                    let lhs = m(z, y).and_then(|zy| m(x, zy)).and_then(|w| m(z, w));
                    let rhs = m(z, x).and_then(|zx| m(zx, z)).and_then(|w| m(w, y));
                    if let (Some(l), Some(r)) = (lhs, rhs) {
                        if l != r {
                            return false;
                        }
                    }
                    // ((xz)y)z = x(z(yz))
                    let lhs = m(x, z).and_then(|xz| m(xz, y)).and_then(|w| m(w, z));
                    let rhs = m(y, z).and_then(|yz| m(z, yz)).and_then(|w| m(x, w));
                    if let (Some(l), Some(r)) = (lhs, rhs) {
                        if l != r {
                            return false;
                        }
                    }
                    // (zx)(yz) = (z(xy))z
                    let lhs = m(z, x).and_then(|zx| m(y, z).and_then(|yz| m(zx, yz)));
                    let rhs = m(x, y).and_then(|xy| m(z, xy)).and_then(|w| m(w, z));
                    if let (Some(l), Some(r)) = (lhs, rhs) {
                        if l != r {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn to_loop(&self) -> LoopTable {
        let products = self.cells.iter().map(|&v| v as usize).collect();
        LoopTable::new(MagmaTable::new(self.n, products).expect("in range"))
            .expect("completed normalized Latin square")
    }
}

/// Cells still to fill, row-major, rows and columns `1..n`.
fn free_cells(n: usize) -> Vec<(usize, usize)> {
    (1..n).flat_map(|r| (1..n).map(move |c| (r, c))).collect()
}

/// Depth-first completion from `depth`. `visit` sees each completed table;
/// `stop_at` truncates the search to the first `stop_at` cells (prefix
/// generation).
fn dfs<F>(
    p: &mut Partial,
    cells: &[(usize, usize)],
    depth: usize,
    stop_at: usize,
    prune: bool,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&Partial) -> ControlFlow<()>,
{
    if depth == stop_at {
        return visit(p);
    }
    let (r, c) = cells[depth];
    let full = (1u32 << p.n) - 1;
    let mut cand = full & !(p.row_used[r] | p.col_used[c]);
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        p.set(r, c, v);
        if !prune || p.moufang_consistent() {
            dfs(p, cells, depth + 1, stop_at, prune, visit)?;
        }
        p.unset(r, c, v);
    }
    ControlFlow::Continue(())
}

/// Applies filters and isomorphism rejection to one completed table.
fn screen(job: &EnumerationJob, t: &LoopTable, summary: &mut EnumerationSummary) -> bool {
    summary.searched += 1;
    for (i, f) in job.filters.iter().enumerate() {
        if !f.accepts(t) {
            return false;
        }
        summary.after_filter[i].1 += 1;
    }
    if job.up_to_iso {
        if !is_canonical(t) {
            return false;
        }
        *summary.iso_classes.get_or_insert(0) += 1;
    }
    true
}

fn empty_summary(job: &EnumerationJob) -> EnumerationSummary {
    EnumerationSummary {
        searched: 0,
        after_filter: job.filters.iter().map(|&f| (f, 0)).collect(),
        iso_classes: job.up_to_iso.then_some(0),
        emitted: 0,
    }
}

/// Streams matching tables in lexicographic order on the calling thread.
/// The visitor may stop the search early; `job.limit` is honoured.
pub fn enumerate_streaming<F>(job: &EnumerationJob, mut visit: F) -> Result<EnumerationSummary>
where
    F: FnMut(&LoopTable) -> ControlFlow<()>,
{
    job.check()?;
    let n = job.order;
    let mut summary = empty_summary(job);
    if job.limit == Some(0) {
        return Ok(summary);
    }
    let cells = free_cells(n);
    let mut p = Partial::new(n);
    let prune = job.prunes_moufang();
    let _ = dfs(&mut p, &cells, 0, cells.len(), prune, &mut |p: &Partial| {
        let t = p.to_loop();
        if !screen(job, &t, &mut summary) {
            return ControlFlow::Continue(());
        }
        summary.emitted += 1;
        visit(&t)?;
        if job.limit.is_some_and(|k| summary.emitted as usize >= k) {
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    Ok(summary)
}

/// Collects matching tables in lexicographic order.
///
/// Work is split across rayon workers by the possible completions of row 1;
/// each worker searches its subtrees independently and results are
/// concatenated in prefix order, so output does not depend on thread count.
pub fn enumerate(job: &EnumerationJob) -> Result<(Vec<LoopTable>, EnumerationSummary)> {
    job.check()?;
    if job.limit.is_some() || job.order <= 3 {
        let mut out = Vec::new();
        let summary = enumerate_streaming(job, |t| {
            out.push(t.clone());
            ControlFlow::Continue(())
        })?;
        return Ok((out, summary));
    }
    let n = job.order;
    let cells = free_cells(n);
    let prune = job.prunes_moufang();
    let mut prefixes = Vec::new();
    let mut root = Partial::new(n);
    let _ = dfs(&mut root, &cells, 0, n - 1, prune, &mut |p: &Partial| {
        prefixes.push(p.clone());
        ControlFlow::Continue(())
    });

    let parts: Vec<(Vec<LoopTable>, EnumerationSummary)> = prefixes
        .into_par_iter()
        .map(|mut p| {
            let mut found = Vec::new();
            let mut summary = empty_summary(job);
            let _ = dfs(
                &mut p,
                &cells,
                n - 1,
                cells.len(),
                prune,
                &mut |p: &Partial| {
                    let t = p.to_loop();
                    if screen(job, &t, &mut summary) {
                        summary.emitted += 1;
                        found.push(t);
                    }
                    ControlFlow::Continue(())
                },
            );
            (found, summary)
        })
        .collect();

    let mut all = Vec::new();
    let mut summary = empty_summary(job);
    for (found, s) in parts {
        all.extend(found);
        summary.merge(&s);
    }
    Ok((all, summary))
}

/// Serialized lexicographically least normalized relabeling: one byte for the
/// order followed by the table entries row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(pub Vec<u8>);

pub fn canonical_form(t: &LoopTable) -> Result<CanonicalForm> {
    let (table, _) = canonical_relabeling(t)?;
    let mut bytes = Vec::with_capacity(1 + table.len());
    bytes.push(t.order() as u8);
    bytes.extend(table.iter().map(|&v| v as u8));
    Ok(CanonicalForm(bytes))
}

/// The lexicographically least normalized table isomorphic to `t`.
pub fn canonical_table(t: &LoopTable) -> Result<LoopTable> {
    let (_, f) = canonical_relabeling(t)?;
    Ok(t.relabel(&f))
}

/// True iff `t` is already its own canonical table.
pub fn is_canonical(t: &LoopTable) -> bool {
    t.identity() == 0
        && canonical_relabeling(t)
            .map(|(table, _)| table == t.magma().products())
            .unwrap_or(false)
}

/// Search for the least relabeling.
///
/// A relabeling that fixes the identity at 0 is fully determined once row 1
/// of the relabeled table is known. Row 1 is built column by column: the
/// preimage of label 1 is chosen first; at column `j` an unlabeled column
/// preimage is chosen among the candidates that minimise the entry, and an
/// unlabeled product always takes the next free label, which is the least
/// value that entry can have.
fn canonical_relabeling(t: &LoopTable) -> Result<(Vec<usize>, Permutation)> {
    let n = t.order();
    if n > MAX_ORDER {
        return Err(LoopError::OrderTooLarge {
            order: n,
            max: MAX_ORDER,
        });
    }
    let e = t.identity();
    if n == 1 {
        return Ok((vec![0], Permutation::identity(1)));
    }
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for a in (0..n).filter(|&a| a != e) {
        let mut st = Labels::new(n);
        st.assign(e);
        st.assign(a);
        let mut row1 = vec![1usize; 1];
        row1.reserve(n);
        canon_row1(t, a, &mut st, &mut row1, &mut best);
    }
    let (table, new_of) = best.expect("at least one candidate");
    Ok((table, Permutation::from_images(new_of).expect("bijection")))
}

struct Labels {
    new_of: Vec<Option<usize>>,
    old_of: Vec<usize>,
}

impl Labels {
    fn new(n: usize) -> Self {
        Labels {
            new_of: vec![None; n],
            old_of: Vec::with_capacity(n),
        }
    }

    fn assign(&mut self, old: usize) -> usize {
        let l = self.old_of.len();
        self.new_of[old] = Some(l);
        self.old_of.push(old);
        l
    }

    fn unassign_to(&mut self, len: usize) {
        while self.old_of.len() > len {
            let old = self.old_of.pop().unwrap();
            self.new_of[old] = None;
        }
    }
}

fn canon_row1(
    t: &LoopTable,
    a: usize,
    st: &mut Labels,
    row1: &mut Vec<usize>,
    best: &mut Option<(Vec<usize>, Vec<usize>)>,
) {
    let n = t.order();
    let j = row1.len();
    if let Some((bt, _)) = best.as_ref() {
        // compare row 1 prefix (row 0 is always the identity row)
        match row1[..].cmp(&bt[n..n + j]) {
            std::cmp::Ordering::Greater => return,
            std::cmp::Ordering::Less | std::cmp::Ordering::Equal => {}
        }
    }
    if j == n {
        let new_of: Vec<usize> = st.new_of.iter().map(|v| v.unwrap()).collect();
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                table[new_of[x] * n + new_of[y]] = new_of[t.mul(x, y)];
            }
        }
        if best.as_ref().is_none_or(|(bt, _)| table < *bt) {
            *best = Some((table, new_of));
        }
        return;
    }
    let mark = st.old_of.len();
    if j < st.old_of.len() {
        let b = st.old_of[j];
        let v = entry(t, a, b, st);
        row1.push(v);
        canon_row1(t, a, st, row1, best);
        row1.pop();
        st.unassign_to(mark);
        return;
    }
    // label j is free: choose its preimage among unlabeled elements
    let cands: Vec<usize> = (0..n).filter(|&b| st.new_of[b].is_none()).collect();
    let value_for = |b: usize| match st.new_of[t.mul(a, b)] {
        Some(l) => l,
        None => j + 1,
    };
    let min = cands.iter().map(|&b| value_for(b)).min().unwrap();
    let chosen: Vec<usize> = cands.into_iter().filter(|&b| value_for(b) == min).collect();
    for b in chosen {
        st.assign(b);
        let v = entry(t, a, b, st);
        row1.push(v);
        canon_row1(t, a, st, row1, best);
        row1.pop();
        st.unassign_to(mark);
    }
}

/// Label of `a·b`, assigning the next free label if needed.
fn entry(t: &LoopTable, a: usize, b: usize, st: &mut Labels) -> usize {
    let p = t.mul(a, b);
    match st.new_of[p] {
        Some(l) => l,
        None => st.assign(p),
    }
}

/// Nonassociative Moufang loops of order `n` (one per isomorphism class) with
/// association probability strictly above `bound`. The nuclear-commutator
/// condition is not imposed. An empty result means none exist at this order.
pub fn counterexample_search(
    n: usize,
    bound: ExactFraction,
) -> Result<Vec<(LoopTable, ExactFraction)>> {
    let job = EnumerationJob::new(n)
        .filter(Filter::Moufang)
        .filter(Filter::Nonassociative)
        .up_to_iso(true);
    let (found, _) = enumerate(&job)?;
    Ok(found
        .into_iter()
        .map(|t| {
            let p = p_assoc(&t);
            (t, p)
        })
        .filter(|(_, p)| *p > bound)
        .collect())
}

/// Whether every Moufang consequence checked during pruning holds on `t`.
pub fn satisfies_pruning_laws(t: &LoopTable) -> bool {
    [
        Law::Moufang1,
        Law::Moufang2,
        Law::Moufang3,
        Law::LeftAlternative,
        Law::RightAlternative,
    ]
    .iter()
    .all(|l| l.first_violation(t).is_none())
}
