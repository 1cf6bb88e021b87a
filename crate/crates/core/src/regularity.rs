//! Von Neumann regularity, unit regularity and one-sided unit regularity,
//! each with explicit witnesses. All searches run in ascending code order, so
//! the witness returned is always the lowest one.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::RingError;
use crate::ring::{Element, RingView};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegularityKind {
    NotRegular,
    Regular,
    LeftUnitRegular,
    RightUnitRegular,
    UnitRegular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
}

/// Classification of one element with the witnesses that justify it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityWitness {
    pub kind: RegularityKind,
    /// Inner inverse: `a = a t a`.
    pub t: Option<Element>,
    /// Middle term with `a = a u a`.
    pub u: Option<Element>,
    /// Two-sided inverse of `u`, or its one-sided partner.
    pub u_partner: Option<Element>,
}

impl RegularityWitness {
    /// Re-check every identity the witness claims.
    pub fn verify<V: RingView>(&self, ring: &V, a: Element) -> bool {
        let one = ring.one();
        let sandwich = |m| ring.mul(ring.mul(a, m), a) == a;
        let t_ok = self.t.is_none_or(sandwich);
        let pair = self.u.zip(self.u_partner);
        let u_ok = match self.kind {
            RegularityKind::NotRegular => self.t.is_none() && self.u.is_none(),
            RegularityKind::Regular => self.t.is_some(),
            RegularityKind::UnitRegular => {
                pair.is_some_and(|(u, v)| sandwich(u) && ring.mul(u, v) == one && ring.mul(v, u) == one)
            }
            RegularityKind::RightUnitRegular => pair.is_some_and(|(u, v)| sandwich(u) && ring.mul(u, v) == one),
            RegularityKind::LeftUnitRegular => pair.is_some_and(|(u, v)| sandwich(u) && ring.mul(v, u) == one),
        };
        t_ok && u_ok
    }
}

/// Whether `b` annihilates a nonzero element of the carrier from the left
/// (`b c = 0`) or from the right (`c b = 0`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ZeroDivisorStatus {
    pub left: bool,
    pub right: bool,
}

impl ZeroDivisorStatus {
    pub fn is_regular(&self) -> bool {
        !self.left && !self.right
    }
}

/// First `t` with `a = a t a`.
pub fn regular_witness<V: RingView>(ring: &V, a: Element) -> Option<Element> {
    ring.elements().find(|&t| ring.mul(ring.mul(a, t), a) == a)
}

/// First unit `u` with `a = a u a`, together with `u^-1`.
pub fn unit_regular_witness<V: RingView>(ring: &V, a: Element) -> Option<(Element, Element)> {
    ring.units().pairs().iter().copied().find(|&(u, _)| ring.mul(ring.mul(a, u), a) == a)
}

/// Cached form of [`unit_regular_witness`].
pub fn unit_regular_lookup<V: RingView>(ring: &V, a: Element) -> Option<(Element, Element)> {
    ring.position(a).and_then(|p| ring.unit_regular_table()[p])
}

pub(crate) fn unit_regular_sweep<V: RingView>(ring: &V) -> Vec<Option<(Element, Element)>> {
    let units = ring.units();
    (0..ring.len())
        .into_par_iter()
        .map(|i| {
            let a = ring.element_at(i);
            units.pairs().iter().copied().find(|&(u, _)| ring.mul(ring.mul(a, u), a) == a)
        })
        .collect()
}

/// First `u` with `a = a u a` that has a one-sided inverse on `side`
/// (`u v = 1` for [`Side::Right`], `v u = 1` for [`Side::Left`]), together with
/// the first such `v`.
pub fn one_sided_unit_regular_witness<V: RingView>(ring: &V, a: Element, side: Side) -> Option<(Element, Element)> {
    let one = ring.one();
    ring.elements().filter(|&u| ring.mul(ring.mul(a, u), a) == a).find_map(|u| {
        ring.elements()
            .find(|&v| match side {
                Side::Right => ring.mul(u, v) == one,
                Side::Left => ring.mul(v, u) == one,
            })
            .map(|v| (u, v))
    })
}

/// Strongest regularity label for `a`, with witnesses.
pub fn classify<V: RingView>(ring: &V, a: Element) -> RegularityWitness {
    let t = regular_witness(ring, a);
    if t.is_none() {
        return RegularityWitness { kind: RegularityKind::NotRegular, t: None, u: None, u_partner: None };
    }
    if let Some((u, v)) = unit_regular_lookup(ring, a) {
        return RegularityWitness { kind: RegularityKind::UnitRegular, t, u: Some(u), u_partner: Some(v) };
    }
    for (side, kind) in [(Side::Right, RegularityKind::RightUnitRegular), (Side::Left, RegularityKind::LeftUnitRegular)]
    {
        if let Some((u, v)) = one_sided_unit_regular_witness(ring, a, side) {
            return RegularityWitness { kind, t, u: Some(u), u_partner: Some(v) };
        }
    }
    RegularityWitness { kind: RegularityKind::Regular, t, u: None, u_partner: None }
}

/// Zero-divisor flags of `b` computed inside the given carrier only.
pub fn zero_divisor_status<V: RingView>(ring: &V, b: Element) -> Result<ZeroDivisorStatus, RingError> {
    ring.require(b)?;
    let zero = ring.zero();
    let nonzero = || ring.elements().filter(move |&c| c != zero);
    Ok(ZeroDivisorStatus {
        left: nonzero().any(|c| ring.mul(b, c) == zero),
        right: nonzero().any(|c| ring.mul(c, b) == zero),
    })
}

/// `ur(R)` in code order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UrSet {
    pub elements: Vec<Element>,
    /// Every carrier element is unit regular.
    pub unit_regular_ring: bool,
}

pub fn ur_set<V: RingView>(ring: &V) -> UrSet {
    let elements: Vec<Element> = ring
        .unit_regular_table()
        .iter()
        .enumerate()
        .filter(|(_, w)| w.is_some())
        .map(|(i, _)| ring.element_at(i))
        .collect();
    let unit_regular_ring = elements.len() == ring.len();
    UrSet { elements, unit_regular_ring }
}

/// Regular elements (inner inverse exists) in code order.
pub fn regular_set<V: RingView>(ring: &V) -> Vec<Element> {
    (0..ring.len())
        .into_par_iter()
        .map(|i| ring.element_at(i))
        .filter(|&a| unit_regular_lookup(ring, a).is_some() || regular_witness(ring, a).is_some())
        .collect()
}
