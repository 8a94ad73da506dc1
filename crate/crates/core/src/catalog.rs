//! Built-in loops: the octonion loop O16, the quaternion group, the smallest
//! nonassociative CC loop, and reference groups.
//!
//! Every entry carries a list of expected properties that are re-checked when
//! the entry is materialised; a failing check is a construction defect and
//! panics.

use std::sync::OnceLock;

use crate::error::{LoopError, Result};
use crate::identities::{is_associative, is_cc, is_moufang, MoufangVariant};
use crate::probability::{p_assoc, p_comm, ExactFraction};
use crate::structure::{cosets, nucleus, quotient, NucleusKind, Side};
use crate::table::{isomorphic, LoopTable, MagmaTable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expectation {
    Order(usize),
    Associative(bool),
    Moufang(bool),
    Cc(bool),
    NucleusSize(usize),
    NucleusIndex(usize),
    /// `G/𝔑` is isomorphic to the elementary abelian group of this order.
    QuotientElementaryAbelian(usize),
    PAssoc(ExactFraction),
    PComm(ExactFraction),
}

impl Expectation {
    pub fn holds(&self, t: &LoopTable) -> bool {
        match *self {
            Expectation::Order(n) => t.order() == n,
            Expectation::Associative(b) => is_associative(t).holds == b,
            Expectation::Moufang(b) => is_moufang(t, MoufangVariant::All).holds == b,
            Expectation::Cc(b) => is_cc(t).holds == b,
            Expectation::NucleusSize(k) => nucleus(t, NucleusKind::Full).len() == k,
            Expectation::NucleusIndex(k) => {
                let nuc = nucleus(t, NucleusKind::Full);
                cosets(t, &nuc, Side::Left)
                    .map(|c| c.partition && c.index == Some(k))
                    .unwrap_or(false)
            }
            Expectation::QuotientElementaryAbelian(k) => {
                let nuc = nucleus(t, NucleusKind::Full);
                let Ok(q) = quotient(t, &nuc) else {
                    return false;
                };
                let Ok(target) = elementary_abelian(k) else {
                    return false;
                };
                matches!(isomorphic(&q.table, &target.table), Ok(Some(_)))
            }
            Expectation::PAssoc(p) => p_assoc(t) == p,
            Expectation::PComm(p) => p_comm(t) == p,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Expectation::Order(n) => format!("order = {n}"),
            Expectation::Associative(b) => format!("associative = {b}"),
            Expectation::Moufang(b) => format!("moufang = {b}"),
            Expectation::Cc(b) => format!("cc = {b}"),
            Expectation::NucleusSize(k) => format!("|nucleus| = {k}"),
            Expectation::NucleusIndex(k) => format!("[G : nucleus] = {k}"),
            Expectation::QuotientElementaryAbelian(k) => {
                format!("G/nucleus ≅ elementary_abelian({k})")
            }
            Expectation::PAssoc(p) => format!("p_assoc = {p}"),
            Expectation::PComm(p) => format!("p_comm = {p}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub table: LoopTable,
    pub provenance: &'static str,
    pub expected: Vec<Expectation>,
}

impl CatalogEntry {
    fn materialize(
        name: impl Into<String>,
        table: LoopTable,
        provenance: &'static str,
        expected: Vec<Expectation>,
    ) -> Self {
        let name = name.into();
        for e in &expected {
            assert!(
                e.holds(&table),
                "catalog entry `{name}` fails its self-check: {}",
                e.describe()
            );
        }
        CatalogEntry {
            name,
            table,
            provenance,
            expected,
        }
    }
}

// Quaternion units: label = 2·basis + sign, basis 0..4 = 1, i, j, k, sign 1 = negative.
const QUAT_BASIS: [[(usize, bool); 4]; 4] = [
    [(0, false), (1, false), (2, false), (3, false)],
    [(1, false), (0, true), (3, false), (2, true)],
    [(2, false), (3, true), (0, true), (1, false)],
    [(3, false), (2, false), (1, true), (0, true)],
];

fn quat_mul(a: usize, b: usize) -> usize {
    let (basis, neg) = QUAT_BASIS[a / 2][b / 2];
    2 * basis + usize::from(neg ^ (a % 2 == 1) ^ (b % 2 == 1))
}

fn quat_conj(a: usize) -> usize {
    if a / 2 == 0 {
        a
    } else {
        a ^ 1
    }
}

fn quat_neg(a: usize) -> usize {
    a ^ 1
}

/// Element labels of [`q8`].
pub mod q8_labels {
    pub const ONE: usize = 0;
    pub const MINUS_ONE: usize = 1;
    pub const I: usize = 2;
    pub const MINUS_I: usize = 3;
    pub const J: usize = 4;
    pub const MINUS_J: usize = 5;
    pub const K: usize = 6;
    pub const MINUS_K: usize = 7;
}

/// Element labels of [`o16`]: `e_k` is `2k`, `−e_k` is `2k + 1`.
pub mod o16_labels {
    pub const fn unit(k: usize) -> usize {
        2 * k
    }
    pub const fn neg_unit(k: usize) -> usize {
        2 * k + 1
    }
}

fn q8_table() -> LoopTable {
    let products = (0..8)
        .flat_map(|a| (0..8).map(move |b| quat_mul(a, b)))
        .collect();
    LoopTable::new(MagmaTable::new(8, products).expect("in range")).expect("Q8 is a loop")
}

/// Cayley–Dickson doubling `(a, b)(c, d) = (ac − d*b, da + bc*)` of the
/// quaternion units, restricted to the 16 units where one half is zero.
/// Element `8h + q` is `(q, 0)` for `h = 0` and `(0, q)` for `h = 1`.
fn o16_table() -> LoopTable {
    let mul = |x: usize, y: usize| -> usize {
        let (hx, a) = (x / 8, x % 8);
        let (hy, c) = (y / 8, y % 8);
        match (hx, hy) {
            (0, 0) => quat_mul(a, c),
            // (a,0)(0,d) = (0, da)
            (0, 1) => 8 + quat_mul(c, a),
            // (0,b)(c,0) = (0, bc*)
            (1, 0) => 8 + quat_mul(a, quat_conj(c)),
            // (0,b)(0,d) = (−d*b, 0)
            _ => quat_neg(quat_mul(quat_conj(c), a)),
        }
    };
    let products = (0..16)
        .flat_map(|x| (0..16).map(move |y| mul(x, y)))
        .collect();
    LoopTable::new(MagmaTable::new(16, products).expect("in range")).expect("O16 is a loop")
}

/// First table, in lexicographic order of normalized tables, among the
/// order-6 loops that are CC and nonassociative. Regenerated by the
/// enumerator in tests.
pub const SMALLEST_CC_ROWS: [[usize; 6]; 6] = [
    [0, 1, 2, 3, 4, 5],
    [1, 2, 0, 4, 5, 3],
    [2, 0, 1, 5, 3, 4],
    [3, 5, 4, 1, 0, 2],
    [4, 3, 5, 2, 1, 0],
    [5, 4, 3, 0, 2, 1],
];

pub fn o16() -> &'static CatalogEntry {
    static ENTRY: OnceLock<CatalogEntry> = OnceLock::new();
    ENTRY.get_or_init(|| {
        CatalogEntry::materialize(
            "o16",
            o16_table(),
            "Cayley–Dickson doubling of the quaternion units, (a,b)(c,d) = (ac − d*b, da + bc*)",
            vec![
                Expectation::Order(16),
                Expectation::Moufang(true),
                Expectation::Associative(false),
                Expectation::NucleusSize(2),
                Expectation::NucleusIndex(8),
                Expectation::QuotientElementaryAbelian(8),
                Expectation::PAssoc(ExactFraction::new(43, 64)),
            ],
        )
    })
}

pub fn q8() -> &'static CatalogEntry {
    static ENTRY: OnceLock<CatalogEntry> = OnceLock::new();
    ENTRY.get_or_init(|| {
        CatalogEntry::materialize(
            "q8",
            q8_table(),
            "quaternion units ±1, ±i, ±j, ±k under Hamilton's relations",
            vec![
                Expectation::Order(8),
                Expectation::Associative(true),
                Expectation::PComm(ExactFraction::new(5, 8)),
            ],
        )
    })
}

pub fn smallest_cc() -> &'static CatalogEntry {
    static ENTRY: OnceLock<CatalogEntry> = OnceLock::new();
    ENTRY.get_or_init(|| {
        CatalogEntry::materialize(
            "smallest_cc",
            LoopTable::from_rows(&SMALLEST_CC_ROWS).expect("frozen table is a loop"),
            "first order-6 loop passing {cc, nonassociative} in enumeration order",
            vec![
                Expectation::Order(6),
                Expectation::Cc(true),
                Expectation::Associative(false),
                Expectation::PAssoc(ExactFraction::new(7, 8)),
            ],
        )
    })
}

pub fn cyclic(n: usize) -> Result<CatalogEntry> {
    if n == 0 {
        return Err(LoopError::InvalidOrder(n));
    }
    let products = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i + j) % n))
        .collect();
    let table = LoopTable::new(MagmaTable::new(n, products)?)?;
    Ok(CatalogEntry::materialize(
        format!("cyclic{n}"),
        table,
        "addition modulo n",
        vec![Expectation::Order(n), Expectation::Associative(true)],
    ))
}

/// `(Z/2)^k` of order `n = 2^k`, with `x·y = x XOR y`.
pub fn elementary_abelian(n: usize) -> Result<CatalogEntry> {
    if n == 0 || !n.is_power_of_two() {
        return Err(LoopError::InvalidOrder(n));
    }
    let products = (0..n).flat_map(|i| (0..n).map(move |j| i ^ j)).collect();
    let table = LoopTable::new(MagmaTable::new(n, products)?)?;
    Ok(CatalogEntry::materialize(
        format!("elementary_abelian{n}"),
        table,
        "bitwise XOR on k-bit labels",
        vec![Expectation::Order(n), Expectation::Associative(true)],
    ))
}

pub fn klein4() -> CatalogEntry {
    let mut e = elementary_abelian(4).expect("4 is a power of two");
    e.name = "klein4".into();
    e
}

/// Fixed names accepted by [`lookup`]; `cyclic<N>` and
/// `elementary_abelian<N>` are also accepted.
pub const NAMES: [&str; 4] = ["o16", "q8", "smallest_cc", "klein4"];

pub fn lookup(name: &str) -> Result<CatalogEntry> {
    match name {
        "o16" => return Ok(o16().clone()),
        "q8" => return Ok(q8().clone()),
        "smallest_cc" => return Ok(smallest_cc().clone()),
        "klein4" => return Ok(klein4()),
        _ => {}
    }
    let unknown = || LoopError::UnknownCatalogEntry(name.to_string());
    if let Some(rest) = name.strip_prefix("elementary_abelian") {
        return elementary_abelian(rest.parse().map_err(|_| unknown())?);
    }
    if let Some(rest) = name.strip_prefix("cyclic") {
        return cyclic(rest.parse().map_err(|_| unknown())?);
    }
    Err(unknown())
}
