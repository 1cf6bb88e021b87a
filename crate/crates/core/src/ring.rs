//! Finite rings with identity.
//!
//! Every ring is built from a small construction tree (`Z/n`, full and upper
//! triangular matrix rings, direct products) and its elements are addressed by
//! a dense integer code. Codes are mixed-radix over the tree: a matrix element
//! stores its entries row-major with the first entry most significant, and a
//! product element `(x, y)` has code `code(x) * |R2| + code(y)`. Code `0` is
//! always the zero element.
//!
//! Rings up to [`TABLE_CAP`] elements precompute Cayley tables at construction;
//! larger rings evaluate structurally through the tree.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corner::Idempotent;
use crate::error::RingError;

pub const DEFAULT_SIZE_CAP: u64 = 1 << 20;
pub const DEFAULT_AXIOM_CAP: u64 = 1 << 8;

/// Rings at most this large get precomputed addition/multiplication tables.
pub const TABLE_CAP: u32 = 512;

/// Canonical code of a ring element. Equal codes in the same ring are equal
/// elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(u32);

impl Element {
    pub const ZERO: Element = Element(0);

    pub const fn from_code(code: u32) -> Self {
        Element(code)
    }

    pub const fn code(self) -> u32 {
        self.0
    }

    fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Enumeration caps shared by constructions and exhaustive checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest ring that may be constructed.
    pub size_cap: u64,
    /// Largest ring on which the cubic axiom check runs.
    pub axiom_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { size_cap: DEFAULT_SIZE_CAP, axiom_cap: DEFAULT_AXIOM_CAP }
    }
}

impl Limits {
    fn admit(&self, cardinality: u128) -> Result<u32, RingError> {
        let cap = self.size_cap.min(u32::MAX as u64);
        if cardinality > cap as u128 {
            return Err(RingError::CapExceeded { cardinality, cap: self.size_cap });
        }
        Ok(cardinality as u32)
    }
}

#[derive(Debug)]
pub(crate) enum Construction {
    Zmod(u32),
    Matrix { k: usize, base: FiniteRing },
    Triangular { k: usize, base: FiniteRing },
    Product(FiniteRing, FiniteRing),
    Table { label: String },
}

struct Tables {
    add: Vec<u32>,
    neg: Vec<u32>,
    mul: Vec<u32>,
}

struct Inner {
    size: u32,
    one: Element,
    construction: Construction,
    tables: Option<Tables>,
    units: OnceLock<UnitTable>,
    idempotents: OnceLock<Vec<Idempotent>>,
    unit_regular: OnceLock<Vec<Option<(Element, Element)>>>,
}

/// An immutable finite ring with identity. Cloning is cheap.
#[derive(Clone)]
pub struct FiniteRing(Arc<Inner>);

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing").field("name", &self.name()).field("size", &self.size()).finish()
    }
}

/// `Z/nZ`, with codes equal to residues.
pub fn make_zmod(n: u32) -> Result<FiniteRing, RingError> {
    make_zmod_with(n, &Limits::default())
}

pub fn make_zmod_with(n: u32, limits: &Limits) -> Result<FiniteRing, RingError> {
    if n == 0 {
        return Err(RingError::ZeroModulus);
    }
    let size = limits.admit(n as u128)?;
    Ok(FiniteRing::assemble(size, Element(1 % n), Construction::Zmod(n)))
}

/// The full `k x k` matrix ring over `base`.
pub fn make_matrix_ring(k: usize, base: &FiniteRing, limits: &Limits) -> Result<FiniteRing, RingError> {
    if k == 0 {
        return Err(RingError::ZeroDimension);
    }
    let size = limits.admit(power(base.size() as u128, (k * k) as u32))?;
    let mut one = vec![0u32; k * k];
    for i in 0..k {
        one[i * k + i] = base.one().0;
    }
    let one = Element(encode_digits(&one, base.size()));
    Ok(FiniteRing::assemble(size, one, Construction::Matrix { k, base: base.clone() }))
}

/// Upper triangular `k x k` matrices over `base`.
pub fn make_triangular_ring(k: usize, base: &FiniteRing, limits: &Limits) -> Result<FiniteRing, RingError> {
    if k == 0 {
        return Err(RingError::ZeroDimension);
    }
    let slots = k * (k + 1) / 2;
    let size = limits.admit(power(base.size() as u128, slots as u32))?;
    let mut one = vec![0u32; slots];
    for i in 0..k {
        one[triangular_slot(k, i, i)] = base.one().0;
    }
    let one = Element(encode_digits(&one, base.size()));
    Ok(FiniteRing::assemble(size, one, Construction::Triangular { k, base: base.clone() }))
}

/// The direct product `r1 x r2` with componentwise arithmetic.
pub fn make_product_ring(r1: &FiniteRing, r2: &FiniteRing, limits: &Limits) -> Result<FiniteRing, RingError> {
    let size = limits.admit(r1.size() as u128 * r2.size() as u128)?;
    let one = Element(r1.one().0 * r2.size() + r2.one().0);
    Ok(FiniteRing::assemble(size, one, Construction::Product(r1.clone(), r2.clone())))
}

fn power(base: u128, exp: u32) -> u128 {
    base.checked_pow(exp).unwrap_or(u128::MAX)
}

fn triangular_slot(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < k);
    // rows 0..i contribute k, k-1, ..., k-i+1 slots
    i * k - i * (i.saturating_sub(1)) / 2 + (j - i)
}

fn encode_digits(digits: &[u32], radix: u32) -> u32 {
    digits.iter().fold(0u64, |acc, &d| acc * radix as u64 + d as u64) as u32
}

fn decode_digits(mut code: u32, radix: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for slot in out.iter_mut().rev() {
        *slot = code % radix;
        code /= radix;
    }
    out
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64) {
    // returns (g, x) with a*x = g (mod b)
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r, old_s)
}

impl Construction {
    fn add(&self, size: u32, a: u32, b: u32) -> u32 {
        match self {
            Construction::Zmod(n) => ((a as u64 + b as u64) % *n as u64) as u32,
            Construction::Matrix { base, .. } | Construction::Triangular { base, .. } => {
                let m = base.size();
                let slots = slot_count(self);
                let (x, y) = (decode_digits(a, m, slots), decode_digits(b, m, slots));
                let sum: Vec<u32> = x.iter().zip(&y).map(|(&p, &q)| base.add(Element(p), Element(q)).0).collect();
                encode_digits(&sum, m)
            }
            Construction::Product(r1, r2) => {
                let m = r2.size();
                let hi = r1.add(Element(a / m), Element(b / m)).0;
                let lo = r2.add(Element(a % m), Element(b % m)).0;
                hi * m + lo
            }
            Construction::Table { .. } => unreachable!("table rings always carry tables (size {size})"),
        }
    }

    fn neg(&self, a: u32) -> u32 {
        match self {
            Construction::Zmod(n) => (*n - a) % *n,
            Construction::Matrix { base, .. } | Construction::Triangular { base, .. } => {
                let m = base.size();
                let x = decode_digits(a, m, slot_count(self));
                let out: Vec<u32> = x.iter().map(|&p| base.neg(Element(p)).0).collect();
                encode_digits(&out, m)
            }
            Construction::Product(r1, r2) => {
                let m = r2.size();
                r1.neg(Element(a / m)).0 * m + r2.neg(Element(a % m)).0
            }
            Construction::Table { .. } => unreachable!("table rings always carry tables"),
        }
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        match self {
            Construction::Zmod(n) => ((a as u64 * b as u64) % *n as u64) as u32,
            Construction::Matrix { k, base } | Construction::Triangular { k, base } => {
                let x = self.full_matrix(a);
                let y = self.full_matrix(b);
                let z = mat_mul(base, *k, &x, &y);
                self.pack_matrix(&z).expect("matrix product stays in the construction")
            }
            Construction::Product(r1, r2) => {
                let m = r2.size();
                r1.mul(Element(a / m), Element(b / m)).0 * m + r2.mul(Element(a % m), Element(b % m)).0
            }
            Construction::Table { .. } => unreachable!("table rings always carry tables"),
        }
    }

    /// Full row-major k*k entry list for matrix-like constructions.
    fn full_matrix(&self, code: u32) -> Vec<Element> {
        match self {
            Construction::Matrix { k, base } => {
                decode_digits(code, base.size(), k * k).into_iter().map(Element).collect()
            }
            Construction::Triangular { k, base } => {
                let k = *k;
                let digits = decode_digits(code, base.size(), k * (k + 1) / 2);
                let mut out = vec![Element::ZERO; k * k];
                let mut it = digits.into_iter();
                for i in 0..k {
                    for j in i..k {
                        out[i * k + j] = Element(it.next().unwrap());
                    }
                }
                out
            }
            _ => unreachable!(),
        }
    }

    fn pack_matrix(&self, entries: &[Element]) -> Option<u32> {
        match self {
            Construction::Matrix { k, base } => {
                if entries.len() != k * k {
                    return None;
                }
                let digits: Vec<u32> = entries.iter().map(|e| e.0).collect();
                Some(encode_digits(&digits, base.size()))
            }
            Construction::Triangular { k, base } => {
                let k = *k;
                if entries.len() != k * k {
                    return None;
                }
                let mut digits = Vec::with_capacity(k * (k + 1) / 2);
                for i in 0..k {
                    for j in 0..k {
                        let entry = entries[i * k + j];
                        if j < i {
                            if entry != Element::ZERO {
                                return None;
                            }
                        } else {
                            digits.push(entry.0);
                        }
                    }
                }
                Some(encode_digits(&digits, base.size()))
            }
            _ => None,
        }
    }

    fn commutative(&self) -> bool {
        match self {
            Construction::Zmod(_) => true,
            Construction::Product(r1, r2) => r1.0.construction.commutative() && r2.0.construction.commutative(),
            _ => false,
        }
    }
}

fn slot_count(c: &Construction) -> usize {
    match c {
        Construction::Matrix { k, .. } => k * k,
        Construction::Triangular { k, .. } => k * (k + 1) / 2,
        _ => 1,
    }
}

fn mat_mul(base: &FiniteRing, k: usize, x: &[Element], y: &[Element]) -> Vec<Element> {
    let mut z = vec![Element::ZERO; k * k];
    for i in 0..k {
        for j in 0..k {
            let mut acc = Element::ZERO;
            for l in 0..k {
                acc = base.add(acc, base.mul(x[i * k + l], y[l * k + j]));
            }
            z[i * k + j] = acc;
        }
    }
    z
}

/// Determinant by cofactor expansion. Only meaningful over a commutative base.
fn determinant(base: &FiniteRing, k: usize, m: &[Element]) -> Element {
    match k {
        1 => m[0],
        2 => base.sub(base.mul(m[0], m[3]), base.mul(m[1], m[2])),
        _ => {
            let mut acc = Element::ZERO;
            for j in 0..k {
                let term = base.mul(m[j], determinant(base, k - 1, &minor(k, m, 0, j)));
                acc = if j % 2 == 0 { base.add(acc, term) } else { base.sub(acc, term) };
            }
            acc
        }
    }
}

fn minor(k: usize, m: &[Element], row: usize, col: usize) -> Vec<Element> {
    let mut out = Vec::with_capacity((k - 1) * (k - 1));
    for i in (0..k).filter(|&i| i != row) {
        for j in (0..k).filter(|&j| j != col) {
            out.push(m[i * k + j]);
        }
    }
    out
}

impl FiniteRing {
    fn assemble(size: u32, one: Element, construction: Construction) -> FiniteRing {
        let tables = if size <= TABLE_CAP && !matches!(construction, Construction::Table { .. }) {
            Some(build_tables(size, &construction))
        } else {
            None
        };
        FiniteRing(Arc::new(Inner {
            size,
            one,
            construction,
            tables,
            units: OnceLock::new(),
            idempotents: OnceLock::new(),
            unit_regular: OnceLock::new(),
        }))
    }

    /// A ring given directly by its operation tables (row-major `a * size + b`).
    ///
    /// Table lengths and codes are validated; ring axioms are not, see
    /// [`check_ring_axioms`].
    pub fn from_tables(
        label: impl Into<String>,
        size: u32,
        one: Element,
        add: Vec<u32>,
        neg: Vec<u32>,
        mul: Vec<u32>,
    ) -> Result<FiniteRing, RingError> {
        let n = size as usize;
        if size == 0 {
            return Err(RingError::MalformedTable("empty carrier".into()));
        }
        if add.len() != n * n || mul.len() != n * n || neg.len() != n {
            return Err(RingError::MalformedTable(format!("expected {}x{} tables", n, n)));
        }
        if one.0 >= size || add.iter().chain(&mul).chain(&neg).any(|&c| c >= size) {
            return Err(RingError::MalformedTable("entry out of range".into()));
        }
        Ok(FiniteRing(Arc::new(Inner {
            size,
            one,
            construction: Construction::Table { label: label.into() },
            tables: Some(Tables { add, neg, mul }),
            units: OnceLock::new(),
            idempotents: OnceLock::new(),
            unit_regular: OnceLock::new(),
        })))
    }

    /// Copy of this ring with one multiplication table entry overwritten.
    /// Used for fault injection; the result is generally not a ring.
    pub fn with_corrupted_product(&self, a: Element, b: Element, value: Element) -> Result<FiniteRing, RingError> {
        self.check(a)?;
        self.check(b)?;
        self.check(value)?;
        if self.size() > TABLE_CAP {
            return Err(RingError::CapExceeded { cardinality: self.size() as u128, cap: TABLE_CAP as u64 });
        }
        let n = self.size();
        let all = |f: &dyn Fn(u32, u32) -> u32| -> Vec<u32> {
            (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| f(x, y)).collect()
        };
        let add = all(&|x, y| self.add(Element(x), Element(y)).0);
        let mut mul = all(&|x, y| self.mul(Element(x), Element(y)).0);
        let neg = (0..n).map(|x| self.neg(Element(x)).0).collect();
        mul[(a.0 * n + b.0) as usize] = value.0;
        FiniteRing::from_tables(format!("{}!fault", self.name()), n, self.one(), add, neg, mul)
    }

    pub fn size(&self) -> u32 {
        self.0.size
    }

    pub fn zero(&self) -> Element {
        Element::ZERO
    }

    pub fn one(&self) -> Element {
        self.0.one
    }

    /// Canonical printed name, e.g. `M2(Z3)` or `M2(Z2)xZ2`.
    pub fn name(&self) -> String {
        match &self.0.construction {
            Construction::Zmod(n) => format!("Z{n}"),
            Construction::Matrix { k, base } => format!("M{k}({})", base.name()),
            Construction::Triangular { k, base } => format!("T{k}({})", base.name()),
            Construction::Product(r1, r2) => {
                if matches!(r2.0.construction, Construction::Product(..)) {
                    format!("{}x({})", r1.name(), r2.name())
                } else {
                    format!("{}x{}", r1.name(), r2.name())
                }
            }
            Construction::Table { label } => label.clone(),
        }
    }

    /// True when the construction tree proves commutativity (`Z/n` and
    /// products of such).
    pub fn is_provably_commutative(&self) -> bool {
        self.0.construction.commutative()
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = Element> + ExactSizeIterator {
        (0..self.size()).map(Element)
    }

    pub fn contains(&self, x: Element) -> bool {
        x.0 < self.size()
    }

    pub fn check(&self, x: Element) -> Result<(), RingError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(RingError::InvalidElement { code: x.0, size: self.size(), ring: self.name() })
        }
    }

    /// Element with the given code, validated.
    pub fn element(&self, code: u32) -> Result<Element, RingError> {
        let x = Element(code);
        self.check(x)?;
        Ok(x)
    }

    #[inline]
    pub fn add(&self, a: Element, b: Element) -> Element {
        debug_assert!(self.contains(a) && self.contains(b));
        match &self.0.tables {
            Some(t) => Element(t.add[(a.0 * self.0.size + b.0) as usize]),
            None => Element(self.0.construction.add(self.0.size, a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Element) -> Element {
        debug_assert!(self.contains(a));
        match &self.0.tables {
            Some(t) => Element(t.neg[a.idx()]),
            None => Element(self.0.construction.neg(a.0)),
        }
    }

    #[inline]
    pub fn sub(&self, a: Element, b: Element) -> Element {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        debug_assert!(self.contains(a) && self.contains(b));
        match &self.0.tables {
            Some(t) => Element(t.mul[(a.0 * self.0.size + b.0) as usize]),
            None => Element(self.0.construction.mul(a.0, b.0)),
        }
    }

    /// Product of a sequence of elements, left to right.
    pub fn product(&self, factors: &[Element]) -> Element {
        factors.iter().fold(self.one(), |acc, &x| self.mul(acc, x))
    }

    /// Arithmetic through the construction tree, bypassing any tables.
    pub fn structural_add(&self, a: Element, b: Element) -> Element {
        match &self.0.construction {
            Construction::Table { .. } => self.add(a, b),
            c => Element(c.add(self.0.size, a.0, b.0)),
        }
    }

    pub fn structural_mul(&self, a: Element, b: Element) -> Element {
        match &self.0.construction {
            Construction::Table { .. } => self.mul(a, b),
            c => Element(c.mul(a.0, b.0)),
        }
    }

    /// Full row-major entries of a matrix or triangular ring element.
    pub fn matrix_entries(&self, x: Element) -> Result<Vec<Element>, RingError> {
        self.check(x)?;
        match &self.0.construction {
            c @ (Construction::Matrix { .. } | Construction::Triangular { .. }) => Ok(c.full_matrix(x.0)),
            _ => Err(RingError::WrongConstruction(self.name())),
        }
    }

    /// Encode a row-major entry list. Triangular rings reject nonzero entries
    /// below the diagonal.
    pub fn matrix_from_entries(&self, entries: &[Element]) -> Result<Element, RingError> {
        let base = self.matrix_base().ok_or_else(|| RingError::WrongConstruction(self.name()))?;
        for &e in entries {
            base.check(e)?;
        }
        self.0
            .construction
            .pack_matrix(entries)
            .map(Element)
            .ok_or_else(|| RingError::OutsideCarrier { element: Element::ZERO, ring: self.name() })
    }

    pub fn matrix_dim(&self) -> Option<usize> {
        match &self.0.construction {
            Construction::Matrix { k, .. } | Construction::Triangular { k, .. } => Some(*k),
            _ => None,
        }
    }

    pub fn matrix_base(&self) -> Option<&FiniteRing> {
        match &self.0.construction {
            Construction::Matrix { base, .. } | Construction::Triangular { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn product_factors(&self) -> Option<(&FiniteRing, &FiniteRing)> {
        match &self.0.construction {
            Construction::Product(r1, r2) => Some((r1, r2)),
            _ => None,
        }
    }

    pub fn product_parts(&self, x: Element) -> Result<(Element, Element), RingError> {
        self.check(x)?;
        let (_, r2) = self.product_factors().ok_or_else(|| RingError::WrongConstruction(self.name()))?;
        Ok((Element(x.0 / r2.size()), Element(x.0 % r2.size())))
    }

    pub fn product_pair(&self, x: Element, y: Element) -> Result<Element, RingError> {
        let (r1, r2) = self.product_factors().ok_or_else(|| RingError::WrongConstruction(self.name()))?;
        r1.check(x)?;
        r2.check(y)?;
        Ok(Element(x.0 * r2.size() + y.0))
    }

    /// Two-sided inverse of `x`, if `x` is a unit.
    ///
    /// Uses the construction tree where it can (gcd for `Z/n`, adjugate over a
    /// commutative base, diagonal units plus back-substitution for triangular
    /// rings, componentwise for products) and a linear scan otherwise.
    pub fn is_unit(&self, x: Element) -> Option<Element> {
        debug_assert!(self.contains(x));
        let inv = match &self.0.construction {
            Construction::Zmod(n) => {
                if *n == 1 {
                    return Some(Element::ZERO);
                }
                let (g, s) = ext_gcd(x.0 as i64, *n as i64);
                if g != 1 {
                    return None;
                }
                Some(Element(s.rem_euclid(*n as i64) as u32))
            }
            Construction::Product(r1, r2) => {
                let m = r2.size();
                let a = r1.is_unit(Element(x.0 / m))?;
                let b = r2.is_unit(Element(x.0 % m))?;
                Some(Element(a.0 * m + b.0))
            }
            Construction::Matrix { k, base } if base.is_provably_commutative() => {
                let k = *k;
                let m = self.0.construction.full_matrix(x.0);
                let det_inv = base.is_unit(determinant(base, k, &m))?;
                let mut inv = vec![Element::ZERO; k * k];
                if k == 1 {
                    inv[0] = det_inv;
                } else {
                    for i in 0..k {
                        for j in 0..k {
                            // adj[j][i] = (-1)^(i+j) det(minor_ij)
                            let c = determinant(base, k - 1, &minor(k, &m, i, j));
                            let c = if (i + j) % 2 == 0 { c } else { base.neg(c) };
                            inv[j * k + i] = base.mul(det_inv, c);
                        }
                    }
                }
                Some(Element(self.0.construction.pack_matrix(&inv).unwrap()))
            }
            Construction::Triangular { k, base } => {
                let k = *k;
                let m = self.0.construction.full_matrix(x.0);
                let mut inv = vec![Element::ZERO; k * k];
                let mut diag = Vec::with_capacity(k);
                for i in 0..k {
                    let d = base.is_unit(m[i * k + i])?;
                    inv[i * k + i] = d;
                    diag.push(d);
                }
                // X_ij = -d_i^{-1} * sum_{l=i+1..=j} U_il X_lj
                for span in 1..k {
                    for i in 0..k - span {
                        let j = i + span;
                        let mut acc = Element::ZERO;
                        for l in i + 1..=j {
                            acc = base.add(acc, base.mul(m[i * k + l], inv[l * k + j]));
                        }
                        inv[i * k + j] = base.neg(base.mul(diag[i], acc));
                    }
                }
                Some(Element(self.0.construction.pack_matrix(&inv).unwrap()))
            }
            _ => self.unit_inverse_by_scan(x),
        };
        debug_assert!(inv.is_none_or(|v| self.mul(x, v) == self.one() && self.mul(v, x) == self.one()));
        inv
    }

    /// Reference unit test: first `v` in code order with `xv = vx = 1`.
    pub fn unit_inverse_by_scan(&self, x: Element) -> Option<Element> {
        let one = self.one();
        self.elements().find(|&v| self.mul(x, v) == one && self.mul(v, x) == one)
    }

    /// The group of units with inverses, computed once.
    pub fn unit_group(&self) -> &UnitTable {
        self.0.units.get_or_init(|| {
            let pairs: Vec<(Element, Element)> = (0..self.size())
                .into_par_iter()
                .filter_map(|c| self.is_unit(Element(c)).map(|v| (Element(c), v)))
                .collect();
            UnitTable::new(pairs)
        })
    }

    /// Idempotents `e` with complements `1 - e`, in code order, computed once.
    pub fn idempotents(&self) -> &[Idempotent] {
        self.0.idempotents.get_or_init(|| {
            let one = self.one();
            (0..self.size())
                .into_par_iter()
                .map(Element)
                .filter(|&e| self.mul(e, e) == e)
                .map(|e| Idempotent::new_unchecked(e, self.sub(one, e)))
                .collect()
        })
    }

    pub(crate) fn unit_regular_cache(&self) -> &[Option<(Element, Element)>] {
        self.0.unit_regular.get_or_init(|| crate::regularity::unit_regular_sweep(self))
    }
}

fn build_tables(size: u32, c: &Construction) -> Tables {
    let n = size;
    let add = (0..n * n).into_par_iter().map(|i| c.add(n, i / n, i % n)).collect();
    let mul = (0..n * n).into_par_iter().map(|i| c.mul(i / n, i % n)).collect();
    let neg = (0..n).map(|a| c.neg(a)).collect();
    Tables { add, neg, mul }
}

/// Unit/inverse pairs of a ring (or corner ring), sorted by unit code.
#[derive(Clone, Debug, Default)]
pub struct UnitTable {
    pairs: Vec<(Element, Element)>,
    inverse: HashMap<Element, Element>,
}

impl UnitTable {
    pub fn new(mut pairs: Vec<(Element, Element)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        let inverse = pairs.iter().copied().collect();
        UnitTable { pairs, inverse }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(Element, Element)] {
        &self.pairs
    }

    pub fn units(&self) -> impl Iterator<Item = Element> + '_ {
        self.pairs.iter().map(|p| p.0)
    }

    pub fn inverse(&self, u: Element) -> Option<Element> {
        self.inverse.get(&u).copied()
    }

    pub fn contains(&self, u: Element) -> bool {
        self.inverse.contains_key(&u)
    }
}

/// A ring-like carrier whose arithmetic is that of an ambient [`FiniteRing`]:
/// either the ring itself or a corner `eRe` with its own identity.
pub trait RingView: Sync {
    fn ambient(&self) -> &FiniteRing;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The `index`-th carrier element in ascending code order.
    fn element_at(&self, index: usize) -> Element;

    /// Position of `x` in the carrier, if present.
    fn position(&self, x: Element) -> Option<usize>;

    fn contains(&self, x: Element) -> bool {
        self.position(x).is_some()
    }

    fn one(&self) -> Element;

    fn zero(&self) -> Element {
        Element::ZERO
    }

    fn units(&self) -> &UnitTable;

    /// First unit-regular witness `(u, u^-1)` for each carrier position.
    fn unit_regular_table(&self) -> &[Option<(Element, Element)>];

    fn label(&self) -> String;

    fn elements(&self) -> impl Iterator<Item = Element> + '_
    where
        Self: Sized,
    {
        (0..self.len()).map(move |i| self.element_at(i))
    }

    fn add(&self, a: Element, b: Element) -> Element {
        self.ambient().add(a, b)
    }

    fn neg(&self, a: Element) -> Element {
        self.ambient().neg(a)
    }

    fn sub(&self, a: Element, b: Element) -> Element {
        self.ambient().sub(a, b)
    }

    fn mul(&self, a: Element, b: Element) -> Element {
        self.ambient().mul(a, b)
    }

    fn require(&self, x: Element) -> Result<(), RingError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(RingError::OutsideCarrier { element: x, ring: self.label() })
        }
    }
}

impl RingView for FiniteRing {
    fn ambient(&self) -> &FiniteRing {
        self
    }

    fn len(&self) -> usize {
        self.size() as usize
    }

    fn element_at(&self, index: usize) -> Element {
        Element(index as u32)
    }

    fn position(&self, x: Element) -> Option<usize> {
        FiniteRing::contains(self, x).then_some(x.idx())
    }

    fn one(&self) -> Element {
        FiniteRing::one(self)
    }

    fn units(&self) -> &UnitTable {
        self.unit_group()
    }

    fn unit_regular_table(&self) -> &[Option<(Element, Element)>] {
        self.unit_regular_cache()
    }

    fn label(&self) -> String {
        self.name()
    }
}

/// Ring axioms checked by [`check_ring_axioms`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Closure,
    AddAssociative,
    AddCommutative,
    AddIdentity,
    AddInverse,
    MulAssociative,
    MulIdentity,
    LeftDistributive,
    RightDistributive,
}

impl Axiom {
    pub const ALL: [Axiom; 9] = [
        Axiom::Closure,
        Axiom::AddAssociative,
        Axiom::AddCommutative,
        Axiom::AddIdentity,
        Axiom::AddInverse,
        Axiom::MulAssociative,
        Axiom::MulIdentity,
        Axiom::LeftDistributive,
        Axiom::RightDistributive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Closure => "closure",
            Axiom::AddAssociative => "add-associative",
            Axiom::AddCommutative => "add-commutative",
            Axiom::AddIdentity => "add-identity",
            Axiom::AddInverse => "add-inverse",
            Axiom::MulAssociative => "mul-associative",
            Axiom::MulIdentity => "mul-identity",
            Axiom::LeftDistributive => "left-distributive",
            Axiom::RightDistributive => "right-distributive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    /// First failing triple `(x, y, z)` in code order; unused slots are zero.
    pub counterexample: Option<[Element; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub ring: String,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.counterexample.is_none())
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| c.counterexample.is_some())
    }
}

/// Exhaustively check the ring axioms on a carrier, relative to its own zero
/// and identity.
pub fn check_ring_axioms<V: RingView>(ring: &V, limits: &Limits) -> Result<AxiomReport, RingError> {
    let n = ring.len();
    if n as u64 > limits.axiom_cap {
        return Err(RingError::CapExceeded { cardinality: n as u128, cap: limits.axiom_cap });
    }
    let els: Vec<Element> = ring.elements().collect();
    let zero = ring.zero();
    let one = ring.one();

    let first_pair = |pred: &(dyn Fn(Element, Element) -> bool + Sync)| -> Option<[Element; 3]> {
        els.iter().find_map(|&x| els.iter().find(|&&y| !pred(x, y)).map(|&y| [x, y, Element::ZERO]))
    };
    let first_triple = |pred: &(dyn Fn(Element, Element, Element) -> bool + Sync)| -> Option<[Element; 3]> {
        els.par_iter()
            .map(|&x| els.iter().find_map(|&y| els.iter().find(|&&z| !pred(x, y, z)).map(|&z| [x, y, z])))
            .find_first(|r| r.is_some())
            .flatten()
    };

    let mut checks = Vec::with_capacity(Axiom::ALL.len());
    for axiom in Axiom::ALL {
        let counterexample = match axiom {
            Axiom::Closure => first_pair(&|x, y| {
                ring.contains(ring.add(x, y)) && ring.contains(ring.mul(x, y)) && ring.contains(ring.neg(x))
            }),
            Axiom::AddAssociative => {
                first_triple(&|x, y, z| ring.add(ring.add(x, y), z) == ring.add(x, ring.add(y, z)))
            }
            Axiom::AddCommutative => first_pair(&|x, y| ring.add(x, y) == ring.add(y, x)),
            Axiom::AddIdentity => {
                els.iter().find(|&&x| ring.add(zero, x) != x || ring.add(x, zero) != x).map(|&x| [x, zero, zero])
            }
            Axiom::AddInverse => els.iter().find(|&&x| ring.add(x, ring.neg(x)) != zero).map(|&x| [x, zero, zero]),
            Axiom::MulAssociative => {
                first_triple(&|x, y, z| ring.mul(ring.mul(x, y), z) == ring.mul(x, ring.mul(y, z)))
            }
            Axiom::MulIdentity => {
                els.iter().find(|&&x| ring.mul(one, x) != x || ring.mul(x, one) != x).map(|&x| [x, one, zero])
            }
            Axiom::LeftDistributive => {
                first_triple(&|x, y, z| ring.mul(x, ring.add(y, z)) == ring.add(ring.mul(x, y), ring.mul(x, z)))
            }
            Axiom::RightDistributive => {
                first_triple(&|x, y, z| ring.mul(ring.add(x, y), z) == ring.add(ring.mul(x, z), ring.mul(y, z)))
            }
        };
        checks.push(AxiomCheck { axiom, counterexample });
    }
    Ok(AxiomReport { ring: ring.label(), checks })
}
