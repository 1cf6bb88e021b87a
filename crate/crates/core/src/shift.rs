//! Banded endomorphisms of a countably infinite dimensional space over the
//! two-element field, with exact arithmetic.
//!
//! An operator is a finite set of diagonals `(d, m)` sending `e_i` to `e_{i+d}`
//! for every `i >= m`, plus finitely many exceptional columns that list the
//! image of `e_i` outright. Images landing below index 0 are dropped, so the
//! left shift sends `e_0` to zero.
//!
//! Operators are always kept in normal form: diagonal starts are as small as
//! the map allows and no exceptional column repeats what the diagonals already
//! give. Two operators are equal as linear maps exactly when their normal
//! forms are equal, so `==` is map equality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul};

use serde::Serialize;
use thiserror::Error;

/// A finite-support vector over the two-element field, as its set of basis
/// indices.
pub type SparseVector = BTreeSet<u64>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BandOperator {
    diagonals: BTreeMap<i64, u64>,
    exceptions: BTreeMap<u64, SparseVector>,
}

fn xor_into(acc: &mut SparseVector, v: &SparseVector) {
    for &x in v {
        if !acc.remove(&x) {
            acc.insert(x);
        }
    }
}

fn floor_for(offset: i64) -> u64 {
    (-offset).max(0) as u64
}

impl BandOperator {
    /// Build from raw diagonals and exceptional columns; the result is
    /// normalized. Later duplicates of an offset or index win.
    pub fn new(
        diagonals: impl IntoIterator<Item = (i64, u64)>,
        exceptions: impl IntoIterator<Item = (u64, Vec<u64>)>,
    ) -> Self {
        let raw = BandOperator {
            diagonals: diagonals.into_iter().collect(),
            exceptions: exceptions.into_iter().map(|(i, ts)| (i, ts.into_iter().collect())).collect(),
        };
        let bound = raw
            .diagonals
            .iter()
            .map(|(&d, &m)| m.max(floor_for(d)))
            .chain(raw.exceptions.keys().map(|&i| i + 1))
            .max()
            .unwrap_or(0);
        let offsets = raw.diagonals.keys().copied().collect();
        Self::normalize(bound, offsets, |i| raw.raw_apply(i))
    }

    pub fn zero() -> Self {
        BandOperator::default()
    }

    pub fn identity() -> Self {
        BandOperator::new([(0, 0)], [])
    }

    /// `e_i -> e_{i+1}`.
    pub fn right_shift() -> Self {
        BandOperator::new([(1, 0)], [])
    }

    /// `e_0 -> 0`, `e_i -> e_{i-1}`.
    pub fn left_shift() -> Self {
        BandOperator::new([(-1, 0)], [])
    }

    /// Projection onto the line spanned by `e_i`.
    pub fn basis_projection(i: u64) -> Self {
        BandOperator::new([], [(i, vec![i])])
    }

    pub fn diagonals(&self) -> &BTreeMap<i64, u64> {
        &self.diagonals
    }

    pub fn exceptions(&self) -> &BTreeMap<u64, SparseVector> {
        &self.exceptions
    }

    pub fn is_zero(&self) -> bool {
        self.diagonals.is_empty() && self.exceptions.is_empty()
    }

    fn raw_apply(&self, i: u64) -> SparseVector {
        if let Some(v) = self.exceptions.get(&i) {
            return v.clone();
        }
        self.diagonals
            .iter()
            .filter(|(&d, &m)| i >= m && i as i64 + d >= 0)
            .map(|(&d, _)| (i as i64 + d) as u64)
            .collect()
    }

    /// Image of the basis vector `e_i`.
    pub fn apply(&self, i: u64) -> SparseVector {
        self.raw_apply(i)
    }

    pub fn apply_vector(&self, v: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for &i in v {
            xor_into(&mut out, &self.apply(i));
        }
        out
    }

    /// Index from which every column is given by the diagonals alone.
    pub fn tail_bound(&self) -> u64 {
        self.diagonals.values().copied().chain(self.exceptions.keys().map(|&i| i + 1)).max().unwrap_or(0)
    }

    /// Normal form of the map whose columns below `bound` are `image(i)` and
    /// whose columns from `bound` on are `{e_{i+d} : d in offsets}`.
    fn normalize(bound: u64, offsets: BTreeSet<i64>, image: impl Fn(u64) -> SparseVector) -> Self {
        debug_assert!(offsets.iter().all(|&d| bound >= floor_for(d)));
        let images: Vec<SparseVector> = (0..bound).map(image).collect();
        let mut diagonals = BTreeMap::new();
        for &d in &offsets {
            let floor = floor_for(d);
            let mut m = bound;
            while m > floor && images[(m - 1) as usize].contains(&((m as i64 - 1 + d) as u64)) {
                m -= 1;
            }
            diagonals.insert(d, m);
        }
        let mut exceptions = BTreeMap::new();
        for (i, actual) in images.into_iter().enumerate() {
            let i = i as u64;
            let predicted: SparseVector =
                diagonals.iter().filter(|(_, &m)| m <= i).map(|(&d, _)| (i as i64 + d) as u64).collect();
            if predicted != actual {
                exceptions.insert(i, actual);
            }
        }
        BandOperator { diagonals, exceptions }
    }

    pub fn add(&self, other: &BandOperator) -> BandOperator {
        let bound = self.tail_bound().max(other.tail_bound());
        let offsets: BTreeSet<i64> = self
            .diagonals
            .keys()
            .copied()
            .collect::<BTreeSet<_>>()
            .symmetric_difference(&other.diagonals.keys().copied().collect())
            .copied()
            .collect();
        Self::normalize(bound, offsets, |i| {
            let mut v = self.apply(i);
            xor_into(&mut v, &other.apply(i));
            v
        })
    }

    /// `self` after `other`: `e_i -> self(other(e_i))`.
    pub fn compose(&self, other: &BandOperator) -> BandOperator {
        let inner_bound = other.tail_bound() as i64;
        let outer_bound = self.tail_bound() as i64;
        let min_inner = other.diagonals.keys().min().copied().unwrap_or(0);
        let bound = inner_bound.max(outer_bound - min_inner).max(0) as u64;
        let mut parity: BTreeMap<i64, bool> = BTreeMap::new();
        for &dq in other.diagonals.keys() {
            for &dp in self.diagonals.keys() {
                *parity.entry(dq + dp).or_default() ^= true;
            }
        }
        let offsets = parity.into_iter().filter(|&(_, odd)| odd).map(|(d, _)| d).collect();
        Self::normalize(bound, offsets, |i| self.apply_vector(&other.apply(i)))
    }

    /// The map restricted to `span(e_0..e_n)`, with codomain wide enough to hold
    /// every image.
    pub fn truncation(&self, n: u64) -> TruncatedMap {
        let columns: Vec<SparseVector> = (0..=n).map(|i| self.apply(i)).collect();
        let rows = columns.iter().filter_map(|c| c.last()).map(|&r| r + 1).max().unwrap_or(0).max(n + 1);
        TruncatedMap { rows, columns }
    }
}

impl Add for &BandOperator {
    type Output = BandOperator;
    fn add(self, rhs: &BandOperator) -> BandOperator {
        BandOperator::add(self, rhs)
    }
}

impl Mul for &BandOperator {
    type Output = BandOperator;
    fn mul(self, rhs: &BandOperator) -> BandOperator {
        self.compose(rhs)
    }
}

impl fmt::Display for BandOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (d, m) in &self.diagonals {
            parts.push(format!("diag{d:+}@{m}"));
        }
        for (i, v) in &self.exceptions {
            let v: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            parts.push(format!("e{i}->{{{}}}", v.join(",")));
        }
        f.write_str(&parts.join(" + "))
    }
}

/// A finite matrix over the two-element field, stored by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedMap {
    pub rows: u64,
    pub columns: Vec<SparseVector>,
}

impl TruncatedMap {
    pub fn cols(&self) -> u64 {
        self.columns.len() as u64
    }

    /// Rank by elimination over the two-element field.
    pub fn rank(&self) -> u64 {
        let words = self.rows.div_ceil(64) as usize;
        let mut basis: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        for col in &self.columns {
            let mut v = vec![0u64; words];
            for &r in col {
                v[(r / 64) as usize] |= 1 << (r % 64);
            }
            let top =
                |v: &[u64]| (0..words).rev().find(|&w| v[w] != 0).map(|w| w * 64 + 63 - v[w].leading_zeros() as usize);
            while let Some(pivot) = top(&v) {
                match basis.get(&pivot) {
                    Some(b) => v.iter_mut().zip(b).for_each(|(x, y)| *x ^= y),
                    None => {
                        basis.insert(pivot, v);
                        break;
                    }
                }
            }
        }
        basis.len() as u64
    }

    pub fn kernel_dim(&self) -> u64 {
        self.cols() - self.rank()
    }

    pub fn cokernel_dim(&self) -> u64 {
        self.rows - self.rank()
    }
}

/// A 2x2 matrix of banded operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandMatrix2(pub [[BandOperator; 2]; 2]);

impl BandMatrix2 {
    pub fn new(a: BandOperator, b: BandOperator, c: BandOperator, d: BandOperator) -> Self {
        BandMatrix2([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        Self::new(BandOperator::identity(), BandOperator::zero(), BandOperator::zero(), BandOperator::identity())
    }

    pub fn entry(&self, i: usize, j: usize) -> &BandOperator {
        &self.0[i][j]
    }

    pub fn mul(&self, rhs: &BandMatrix2) -> BandMatrix2 {
        let cell = |i: usize, j: usize| &(&self.0[i][0] * &rhs.0[0][j]) + &(&self.0[i][1] * &rhs.0[1][j]);
        Self::new(cell(0, 0), cell(0, 1), cell(1, 0), cell(1, 1))
    }

    pub fn add(&self, rhs: &BandMatrix2) -> BandMatrix2 {
        let cell = |i: usize, j: usize| &self.0[i][j] + &rhs.0[i][j];
        Self::new(cell(0, 0), cell(0, 1), cell(1, 0), cell(1, 1))
    }

    fn entries(&self) -> impl Iterator<Item = &BandOperator> {
        self.0.iter().flatten()
    }
}

/// The identities of the `M2(S)` construction with `s` the right shift and
/// `t` the left shift, checked by normal-form equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleIdentities {
    pub aua_equals_a: bool,
    pub uv_identity: bool,
    pub vu_identity: bool,
    /// `e x e` has only its top-left entry nonzero for the matrices built.
    pub corner_is_top_left: bool,
}

struct Construction {
    s: BandOperator,
    t: BandOperator,
    a: BandMatrix2,
    u: BandMatrix2,
    v: BandMatrix2,
}

impl Construction {
    fn build() -> Self {
        let (s, t) = (BandOperator::right_shift(), BandOperator::left_shift());
        let (zero, one) = (BandOperator::zero(), BandOperator::identity());
        let a = BandMatrix2::new(s.clone(), zero.clone(), zero.clone(), zero.clone());
        let u = BandMatrix2::new(t.clone(), one.clone(), one.clone(), zero.clone());
        // -t = t in characteristic two
        let v = BandMatrix2::new(zero, one.clone(), one, t.clone());
        Construction { s, t, a, u, v }
    }
}

impl CounterexampleIdentities {
    pub fn compute() -> Self {
        let c = Construction::build();
        let id = BandMatrix2::identity();
        let e = BandMatrix2::new(
            BandOperator::identity(),
            BandOperator::zero(),
            BandOperator::zero(),
            BandOperator::zero(),
        );
        let corner_is_top_left = [&c.a, &c.u, &c.v].into_iter().all(|x| {
            let exe = e.mul(x).mul(&e);
            exe.entry(0, 1).is_zero()
                && exe.entry(1, 0).is_zero()
                && exe.entry(1, 1).is_zero()
                && *exe.entry(0, 0) == *x.entry(0, 0)
        });
        CounterexampleIdentities {
            aua_equals_a: c.a.mul(&c.u).mul(&c.a) == c.a,
            uv_identity: c.u.mul(&c.v) == id,
            vu_identity: c.v.mul(&c.u) == id,
            corner_is_top_left,
        }
    }
}

/// `(dim ker, dim coker)` of the right shift restricted to `span(e_0..e_n)`.
pub fn shift_truncation_dims(n: u64) -> (u64, u64) {
    let m = BandOperator::right_shift().truncation(n);
    (m.kernel_dim(), m.cokernel_dim())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShiftError {
    #[error("truncation must be at least 2, got {0}")]
    TruncationTooSmall(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftDemoReport {
    pub truncation: u64,
    /// `s t s = s`, so `s` is regular.
    pub s_regular: bool,
    /// `t s = 1`.
    pub ts_identity: bool,
    /// `s t = 1`; false for the shift pair.
    pub st_identity: bool,
    pub identities: CounterexampleIdentities,
    pub kernel_dim: u64,
    pub cokernel_dim: u64,
    /// Normal forms agree with direct evaluation of the shifts on basis vectors.
    pub evaluation_consistent: bool,
    pub criterion: String,
    pub conclusion: String,
}

impl ShiftDemoReport {
    pub fn passed(&self) -> bool {
        self.s_regular
            && self.ts_identity
            && !self.st_identity
            && self.identities.aua_equals_a
            && self.identities.uv_identity
            && self.identities.vu_identity
            && self.identities.corner_is_top_left
            && self.kernel_dim == 0
            && self.cokernel_dim == 1
            && self.evaluation_consistent
    }
}

fn reference_s(i: u64) -> SparseVector {
    SparseVector::from([i + 1])
}

fn reference_t(i: u64) -> SparseVector {
    if i == 0 {
        SparseVector::new()
    } else {
        SparseVector::from([i - 1])
    }
}

fn reference_then(v: &SparseVector, f: fn(u64) -> SparseVector) -> SparseVector {
    let mut out = SparseVector::new();
    for &i in v {
        xor_into(&mut out, &f(i));
    }
    out
}

/// Realize the corner counterexample over the shift ring and gather evidence
/// that `s` is regular but not unit regular.
pub fn run_shift_demo(truncation: u64) -> Result<ShiftDemoReport, ShiftError> {
    if truncation < 2 {
        return Err(ShiftError::TruncationTooSmall(truncation));
    }
    let c = Construction::build();
    let (s, t) = (&c.s, &c.t);
    let st = s * t;
    let ts = t * s;
    let sts = &st * s;

    type Reference<'a> = Box<dyn Fn(u64) -> SparseVector + 'a>;
    let built: Vec<(&BandOperator, Reference)> = vec![
        (s, Box::new(reference_s)),
        (t, Box::new(reference_t)),
        (&st, Box::new(|i| reference_then(&reference_t(i), reference_s))),
        (&ts, Box::new(|i| reference_then(&reference_s(i), reference_t))),
        (&sts, Box::new(|i| reference_then(&reference_then(&reference_s(i), reference_t), reference_s))),
    ];
    let evaluation_consistent = built.iter().all(|(op, reference)| {
        let k = op.tail_bound() + 5;
        (0..=k).all(|i| op.apply(i) == reference(i))
    }) && [&c.a, &c.u, &c.v].iter().flat_map(|m| m.entries()).all(|op| {
        let k = op.tail_bound() + 5;
        (0..=k).all(|i| op.apply(i) == op.raw_apply(i))
    });

    let map = s.truncation(truncation);
    Ok(ShiftDemoReport {
        truncation,
        s_regular: sts == *s,
        ts_identity: ts == BandOperator::identity(),
        st_identity: st == BandOperator::identity(),
        identities: CounterexampleIdentities::compute(),
        kernel_dim: map.kernel_dim(),
        cokernel_dim: map.cokernel_dim(),
        evaluation_consistent,
        criterion: "an endomorphism of a vector space is unit regular exactly when its kernel and cokernel have \
                    the same dimension (classical fact, cited and not re-proved here)"
            .into(),
        conclusion: "s is regular (s = sts), and not unit regular by the kernel/cokernel criterion: s is injective \
                     with a one-dimensional cokernel at every truncation; a = [[s,0],[0,0]] is unit regular in M2(S) \
                     but its corner entry s is not unit regular in S"
            .into(),
    })
}
