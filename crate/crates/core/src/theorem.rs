//! Unit regularity of corner elements read off from the ambient ring.
//!
//! For an idempotent `e` with complement `f = 1 - e` and `a` in `eRe`, the
//! engine evaluates
//!
//! * (1)  `a` is unit regular in `eRe`
//! * (2)  `a + f` is unit regular in `R`
//! * (3)  `a + b` is unit regular in `R` for every unit `b` of `fRf`
//! * (3') ... for some unit `b` of `fRf`
//! * (4)  `a + b` is unit regular in `R` for every unit regular `b` of `fRf`
//! * (4') ... for some unit regular `b` of `fRf`
//! * (5)  `a + b` is unit regular in `R` for some `b` in `fRf` that is neither a
//!   left nor a right zero divisor of `fRf`
//!
//! Conditions (1)-(5) are equivalent; (4') is reported but is only implied by
//! them. Every true condition carries a witness that is re-verified by direct
//! multiplication before a verdict is returned.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::corner::{corner_ring, CornerRing, Idempotent};
use crate::error::RingError;
use crate::regularity::{unit_regular_lookup, ur_set, zero_divisor_status, Side};
use crate::ring::{make_matrix_ring, Element, FiniteRing, Limits, RingView};
use crate::shift;

/// Rings swept by default, as ring-spec strings.
pub const CURATED_FAMILY: [&str; 10] =
    ["Z4", "Z6", "Z8", "Z12", "Z2xZ4", "T2(Z2)", "T2(Z3)", "M2(Z2)", "M2(Z3)", "M2(Z2)xZ2"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Condition {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "3")]
    Three,
    #[serde(rename = "3'")]
    ThreePrime,
    #[serde(rename = "4")]
    Four,
    #[serde(rename = "4'")]
    FourPrime,
    #[serde(rename = "5")]
    Five,
}

impl Condition {
    pub const ALL: [Condition; 7] = [
        Condition::One,
        Condition::Two,
        Condition::Three,
        Condition::ThreePrime,
        Condition::Four,
        Condition::FourPrime,
        Condition::Five,
    ];

    /// The conditions that must agree.
    pub const EQUIVALENT: [Condition; 6] =
        [Condition::One, Condition::Two, Condition::Three, Condition::ThreePrime, Condition::Four, Condition::Five];

    pub fn label(self) -> &'static str {
        match self {
            Condition::One => "(1)",
            Condition::Two => "(2)",
            Condition::Three => "(3)",
            Condition::ThreePrime => "(3')",
            Condition::Four => "(4)",
            Condition::FourPrime => "(4')",
            Condition::Five => "(5)",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// An implication between two conditions that every verdict must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Implication {
    pub from: Condition,
    pub to: Condition,
}

impl fmt::Display for Implication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}=>{}", self.from, self.to)
    }
}

/// (4)=>(3)=>(2)=>(3')=>(5), and (1)=>(4') by taking `b = 0`.
pub const CHAIN: [Implication; 5] = [
    Implication { from: Condition::Four, to: Condition::Three },
    Implication { from: Condition::Three, to: Condition::Two },
    Implication { from: Condition::Two, to: Condition::ThreePrime },
    Implication { from: Condition::ThreePrime, to: Condition::Five },
    Implication { from: Condition::One, to: Condition::FourPrime },
];

/// `a + b = (a + b) u (a + b)` with `u u_inv = u_inv u = 1`; for condition (1)
/// `b` is absent and the identities are taken in `eRe`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessBundle {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<Element>,
    pub u: Element,
    pub u_inv: Element,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionOutcome {
    pub holds: bool,
    pub witness: Option<WitnessBundle>,
    /// For a failed universal condition, the first `b` that fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_b: Option<Element>,
}

impl ConditionOutcome {
    fn yes(witness: Option<WitnessBundle>) -> Self {
        ConditionOutcome { holds: true, witness, failing_b: None }
    }

    fn no(failing_b: Option<Element>) -> Self {
        ConditionOutcome { holds: false, witness: None, failing_b }
    }
}

/// All conditions for one `(R, e, a)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictReport {
    pub ring: String,
    pub e: Element,
    pub f: Element,
    pub a: Element,
    pub cond1: ConditionOutcome,
    pub cond2: ConditionOutcome,
    pub cond3: ConditionOutcome,
    pub cond3prime: ConditionOutcome,
    pub cond4: ConditionOutcome,
    pub cond4prime: ConditionOutcome,
    pub cond5: ConditionOutcome,
    pub witnesses_verified: bool,
    /// (1), (2), (3), (3'), (4), (5) all agree.
    pub consistent: bool,
}

impl VerdictReport {
    pub fn outcome(&self, c: Condition) -> &ConditionOutcome {
        match c {
            Condition::One => &self.cond1,
            Condition::Two => &self.cond2,
            Condition::Three => &self.cond3,
            Condition::ThreePrime => &self.cond3prime,
            Condition::Four => &self.cond4,
            Condition::FourPrime => &self.cond4prime,
            Condition::Five => &self.cond5,
        }
    }

    pub fn holds(&self, c: Condition) -> bool {
        self.outcome(c).holds
    }

    pub fn chain_violations(&self) -> Vec<Implication> {
        CHAIN.iter().copied().filter(|i| self.holds(i.from) && !self.holds(i.to)).collect()
    }

    /// (1), (2), (3), (3'), (4), (5) agree, recomputed from the outcomes.
    pub fn equivalents_agree(&self) -> bool {
        let first = self.holds(Condition::EQUIVALENT[0]);
        Condition::EQUIVALENT.iter().all(|&c| self.holds(c) == first)
    }

    pub fn is_sound(&self) -> bool {
        self.consistent && self.equivalents_agree() && self.witnesses_verified && self.chain_violations().is_empty()
    }
}

/// The first verdict that is not sound, packaged for reproduction.
pub fn find_unsound(verdicts: &[VerdictReport]) -> Option<ReproBundle> {
    verdicts.iter().find(|v| !v.is_sound()).map(ReproBundle::from_verdict)
}

/// Everything needed to reproduce an inconsistent verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReproBundle {
    pub ring: String,
    pub e: Element,
    pub a: Element,
    pub verdict: VerdictReport,
    pub chain_violations: Vec<String>,
}

impl ReproBundle {
    pub fn from_verdict(verdict: &VerdictReport) -> Self {
        ReproBundle {
            ring: verdict.ring.clone(),
            e: verdict.e,
            a: verdict.a,
            verdict: verdict.clone(),
            chain_violations: verdict.chain_violations().iter().map(|i| i.to_string()).collect(),
        }
    }
}

/// Hypotheses of the corner witness extraction, reported individually.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Precondition {
    /// `a` is not in `eRe`.
    AOutsideCorner,
    /// `b` is not in `fRf`.
    BOutsideComplement,
    /// `b c = 0` for some nonzero `c` in `fRf`.
    BLeftZeroDivisor,
    /// `c b = 0` for some nonzero `c` in `fRf`.
    BRightZeroDivisor,
    /// `a + b != (a + b) u (a + b)`.
    NotInnerInverse,
    /// `(u v - 1) e != 0`.
    RightInverseCondition,
    /// `e (v u - 1) != 0`.
    LeftInverseCondition,
    /// No `v` supplied and `u` has no suitable partner.
    MissingPartner,
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("element {a} is not in the corner ring e{e}Re")]
    NotInCorner { a: Element, e: Element },
    #[error("inconsistent verdict in {} for e = {}, a = {}", .0.ring, .0.e, .0.a)]
    Inconsistent(Box<ReproBundle>),
    #[error("preconditions violated: {0:?}")]
    Preconditions(Vec<Precondition>),
    #[error("s t s != s for s = {s}, t = {t}")]
    NotInnerInverse { s: String, t: String },
}

/// Re-checked conclusions of the extraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessChecks {
    /// `a u' a = a`
    pub a_u_a: bool,
    /// `u' v' = e`
    pub u_v: bool,
    /// `v' u' = e`
    pub v_u: bool,
    /// `u'` and `v'` lie in `eRe`.
    pub in_corner: bool,
}

impl WitnessChecks {
    pub fn all(&self) -> bool {
        self.a_u_a && self.u_v && self.v_u && self.in_corner
    }
}

/// Intermediate identities of the extraction argument, each evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProofIdentities {
    /// `a = a u a`
    pub a_eq_aua: bool,
    /// `b = b u b`
    pub b_eq_bub: bool,
    /// `b u a = 0`
    pub bua_zero: bool,
    /// `a u b = 0`
    pub aub_zero: bool,
    /// `((1 - b u) f) b = 0`
    pub annihilates_b: bool,
    /// `(1 - b u) f = 0`
    pub right_factor_zero: bool,
    /// `e (1 - u b) = 1 - u b`
    pub left_factor_fixed: bool,
    /// `b e = 0`
    pub be_zero: bool,
}

impl ProofIdentities {
    pub fn all(&self) -> bool {
        self.a_eq_aua
            && self.b_eq_bub
            && self.bua_zero
            && self.aub_zero
            && self.annihilates_b
            && self.right_factor_zero
            && self.left_factor_fixed
            && self.be_zero
    }
}

/// `u' = e(u - ubu)e` and `v' = eve` with their verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CornerWitness {
    pub u_prime: Element,
    pub v_prime: Element,
    /// The partner of `u` actually used.
    pub v: Element,
    pub checks: WitnessChecks,
    pub identities: ProofIdentities,
}

/// One-sided extraction result: only the identity for `side` is guaranteed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OneSidedWitness {
    pub side: Side,
    pub u_prime: Element,
    pub v_prime: Element,
    pub v: Element,
    pub a_u_a: bool,
    /// `u' v' = e` for the right side, `v' u' = e` for the left side.
    pub guaranteed: bool,
    /// The other identity, attempted but not promised.
    pub opposite: bool,
}

/// Cached state for checking every corner element against one idempotent.
pub struct CornerSetting {
    ring: FiniteRing,
    idempotent: Idempotent,
    corner_e: CornerRing,
    corner_f: CornerRing,
    f_units: Vec<Element>,
    f_unit_regular: Vec<Element>,
    f_regular_elements: Vec<Element>,
}

impl CornerSetting {
    pub fn new(ring: &FiniteRing, idempotent: Idempotent) -> Self {
        let corner_e = corner_ring(ring, idempotent);
        let corner_f = corner_ring(ring, idempotent.complement());
        let f_units = corner_f.units().units().collect();
        let f_unit_regular = ur_set(&corner_f).elements;
        let f_regular_elements = corner_f
            .carrier()
            .par_iter()
            .copied()
            .filter(|&b| zero_divisor_status(&corner_f, b).map(|s| s.is_regular()).unwrap_or(false))
            .collect();
        CornerSetting {
            ring: ring.clone(),
            idempotent,
            corner_e,
            corner_f,
            f_units,
            f_unit_regular,
            f_regular_elements,
        }
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn idempotent(&self) -> Idempotent {
        self.idempotent
    }

    pub fn corner_e(&self) -> &CornerRing {
        &self.corner_e
    }

    pub fn corner_f(&self) -> &CornerRing {
        &self.corner_f
    }

    /// Elements of `fRf` that are neither left nor right zero divisors there.
    pub fn f_non_zero_divisors(&self) -> &[Element] {
        &self.f_regular_elements
    }

    fn global(&self, a: Element, b: Element) -> Option<WitnessBundle> {
        let x = self.ring.add(a, b);
        unit_regular_lookup(&self.ring, x).map(|(u, u_inv)| WitnessBundle { b: Some(b), u, u_inv })
    }

    fn for_all(&self, a: Element, bs: &[Element]) -> ConditionOutcome {
        let mut first = None;
        for &b in bs {
            match self.global(a, b) {
                Some(w) => {
                    first.get_or_insert(w);
                }
                None => return ConditionOutcome::no(Some(b)),
            }
        }
        ConditionOutcome::yes(first)
    }

    fn exists(&self, a: Element, bs: &[Element]) -> ConditionOutcome {
        match bs.iter().find_map(|&b| self.global(a, b)) {
            Some(w) => ConditionOutcome::yes(Some(w)),
            None => ConditionOutcome::no(None),
        }
    }

    fn require_corner(&self, a: Element) -> Result<(), EngineError> {
        self.ring.check(a)?;
        if self.corner_e.contains(a) {
            Ok(())
        } else {
            Err(EngineError::NotInCorner { a, e: self.idempotent.e() })
        }
    }

    pub fn condition_check(&self, a: Element, which: Condition) -> Result<ConditionOutcome, EngineError> {
        self.require_corner(a)?;
        let f = self.idempotent.f();
        Ok(match which {
            Condition::One => match unit_regular_lookup(&self.corner_e, a) {
                Some((u, u_inv)) => ConditionOutcome::yes(Some(WitnessBundle { b: None, u, u_inv })),
                None => ConditionOutcome::no(None),
            },
            Condition::Two => match self.global(a, f) {
                Some(w) => ConditionOutcome::yes(Some(w)),
                None => ConditionOutcome::no(Some(f)),
            },
            Condition::Three => self.for_all(a, &self.f_units),
            Condition::ThreePrime => self.exists(a, &self.f_units),
            Condition::Four => self.for_all(a, &self.f_unit_regular),
            Condition::FourPrime => self.exists(a, &self.f_unit_regular),
            Condition::Five => self.exists(a, &self.f_regular_elements),
        })
    }

    fn witness_holds(&self, which: Condition, a: Element, w: &WitnessBundle) -> bool {
        let r = &self.ring;
        match which {
            Condition::One => {
                let e = self.idempotent.e();
                self.corner_e.contains(w.u)
                    && self.corner_e.contains(w.u_inv)
                    && r.mul(r.mul(a, w.u), a) == a
                    && r.mul(w.u, w.u_inv) == e
                    && r.mul(w.u_inv, w.u) == e
            }
            _ => {
                let Some(b) = w.b else { return false };
                let x = r.add(a, b);
                let b_ok = match which {
                    Condition::Two => b == self.idempotent.f(),
                    Condition::Three | Condition::ThreePrime => self.f_units.binary_search(&b).is_ok(),
                    Condition::Four | Condition::FourPrime => self.f_unit_regular.binary_search(&b).is_ok(),
                    _ => self.f_regular_elements.binary_search(&b).is_ok(),
                };
                b_ok && r.mul(r.mul(x, w.u), x) == x && r.mul(w.u, w.u_inv) == r.one() && r.mul(w.u_inv, w.u) == r.one()
            }
        }
    }

    pub fn verdict(&self, a: Element) -> Result<VerdictReport, EngineError> {
        let mut outcomes = Vec::with_capacity(Condition::ALL.len());
        for c in Condition::ALL {
            outcomes.push(self.condition_check(a, c)?);
        }
        let witnesses_verified = Condition::ALL
            .iter()
            .zip(&outcomes)
            .all(|(&c, o)| !o.holds || o.witness.is_none_or(|w| self.witness_holds(c, a, &w)))
            && outcomes[0].witness.is_some() == outcomes[0].holds;
        let [cond1, cond2, cond3, cond3prime, cond4, cond4prime, cond5] = outcomes.try_into().unwrap();
        let eq = [cond1.holds, cond2.holds, cond3.holds, cond3prime.holds, cond4.holds, cond5.holds];
        let consistent = eq.iter().all(|&h| h == eq[0]);
        Ok(VerdictReport {
            ring: self.ring.name(),
            e: self.idempotent.e(),
            f: self.idempotent.f(),
            a,
            cond1,
            cond2,
            cond3,
            cond3prime,
            cond4,
            cond4prime,
            cond5,
            witnesses_verified,
            consistent,
        })
    }

    /// Verdicts for every `a` in `eRe`, in code order.
    pub fn verdicts(&self) -> Result<Vec<VerdictReport>, EngineError> {
        self.corner_e.carrier().par_iter().map(|&a| self.verdict(a)).collect()
    }

    fn partner_precondition(&self, u: Element, v: Element, side: Option<Side>) -> Vec<Precondition> {
        let r = &self.ring;
        let (e, one) = (self.idempotent.e(), r.one());
        let mut out = Vec::new();
        if side != Some(Side::Left) && r.mul(r.sub(r.mul(u, v), one), e) != Element::ZERO {
            out.push(Precondition::RightInverseCondition);
        }
        if side != Some(Side::Right) && r.mul(e, r.sub(r.mul(v, u), one)) != Element::ZERO {
            out.push(Precondition::LeftInverseCondition);
        }
        out
    }

    fn split_preconditions(&self, a: Element, b: Element, u: Element) -> Vec<Precondition> {
        let r = &self.ring;
        let mut out = Vec::new();
        if !self.corner_e.contains(a) {
            out.push(Precondition::AOutsideCorner);
        }
        if !self.corner_f.contains(b) {
            out.push(Precondition::BOutsideComplement);
        } else {
            let status = zero_divisor_status(&self.corner_f, b).expect("b checked to be in fRf");
            if status.left {
                out.push(Precondition::BLeftZeroDivisor);
            }
            if status.right {
                out.push(Precondition::BRightZeroDivisor);
            }
        }
        let x = r.add(a, b);
        if r.mul(r.mul(x, u), x) != x {
            out.push(Precondition::NotInnerInverse);
        }
        out
    }

    fn primes(&self, u: Element, v: Element, b: Element) -> (Element, Element) {
        let r = &self.ring;
        let e = self.idempotent.e();
        let ubu = r.mul(r.mul(u, b), u);
        let u_prime = r.mul(r.mul(e, r.sub(u, ubu)), e);
        let v_prime = r.mul(r.mul(e, v), e);
        (u_prime, v_prime)
    }

    /// Extract a unit of `eRe` from `a + b = (a + b) u (a + b)`.
    ///
    /// `v` only has to satisfy `(uv - 1)e = 0` and `e(vu - 1) = 0`; when it is
    /// omitted the inverse of `u` is used.
    pub fn extract(
        &self,
        a: Element,
        b: Element,
        u: Element,
        v: Option<Element>,
    ) -> Result<CornerWitness, EngineError> {
        let r = &self.ring;
        for x in [a, b, u].into_iter().chain(v) {
            r.check(x)?;
        }
        let mut violations = self.split_preconditions(a, b, u);
        let v = match v.or_else(|| r.is_unit(u)) {
            Some(v) => {
                violations.extend(self.partner_precondition(u, v, None));
                v
            }
            None => {
                violations.push(Precondition::MissingPartner);
                Element::ZERO
            }
        };
        if !violations.is_empty() {
            return Err(EngineError::Preconditions(violations));
        }

        let (e, f, one) = (self.idempotent.e(), self.idempotent.f(), r.one());
        let (u_prime, v_prime) = self.primes(u, v, b);
        let checks = WitnessChecks {
            a_u_a: r.product(&[a, u_prime, a]) == a,
            u_v: r.mul(u_prime, v_prime) == e,
            v_u: r.mul(v_prime, u_prime) == e,
            in_corner: self.corner_e.contains(u_prime) && self.corner_e.contains(v_prime),
        };
        let zero = Element::ZERO;
        let one_minus_bu = r.sub(one, r.mul(b, u));
        let one_minus_ub = r.sub(one, r.mul(u, b));
        let right_factor = r.mul(one_minus_bu, f);
        let identities = ProofIdentities {
            a_eq_aua: r.product(&[a, u, a]) == a,
            b_eq_bub: r.product(&[b, u, b]) == b,
            bua_zero: r.product(&[b, u, a]) == zero,
            aub_zero: r.product(&[a, u, b]) == zero,
            annihilates_b: r.mul(right_factor, b) == zero,
            right_factor_zero: right_factor == zero,
            left_factor_fixed: r.mul(e, one_minus_ub) == one_minus_ub,
            be_zero: r.mul(b, e) == zero,
        };
        Ok(CornerWitness { u_prime, v_prime, v, checks, identities })
    }

    /// One-sided extraction. For [`Side::Right`] the hypotheses are that `b` is
    /// not a right zero divisor of `fRf` and `(uv - 1)e = 0`; the partner `v`
    /// defaults to the first element satisfying that.
    pub fn extract_one_sided(
        &self,
        a: Element,
        b: Element,
        u: Element,
        v: Option<Element>,
        side: Side,
    ) -> Result<OneSidedWitness, EngineError> {
        let r = &self.ring;
        for x in [a, b, u].into_iter().chain(v) {
            r.check(x)?;
        }
        let mut violations: Vec<Precondition> = self
            .split_preconditions(a, b, u)
            .into_iter()
            .filter(|p| match side {
                Side::Right => *p != Precondition::BLeftZeroDivisor,
                Side::Left => *p != Precondition::BRightZeroDivisor,
            })
            .collect();
        let v = v.or_else(|| r.elements().find(|&v| self.partner_precondition(u, v, Some(side)).is_empty()));
        let v = match v {
            Some(v) => {
                violations.extend(self.partner_precondition(u, v, Some(side)));
                v
            }
            None => {
                violations.push(Precondition::MissingPartner);
                Element::ZERO
            }
        };
        if !violations.is_empty() {
            return Err(EngineError::Preconditions(violations));
        }
        let e = self.idempotent.e();
        let (u_prime, v_prime) = self.primes(u, v, b);
        let right = r.mul(u_prime, v_prime) == e;
        let left = r.mul(v_prime, u_prime) == e;
        let (guaranteed, opposite) = match side {
            Side::Right => (right, left),
            Side::Left => (left, right),
        };
        Ok(OneSidedWitness { side, u_prime, v_prime, v, a_u_a: r.product(&[a, u_prime, a]) == a, guaranteed, opposite })
    }

    /// Pairs `(x, y)` in `ur(eRe) x ur(fRf)` whose sum is not in `ur(R)`.
    pub fn product_ur_failures(&self) -> (usize, Vec<(Element, Element)>) {
        let ur_e = ur_set(&self.corner_e).elements;
        let mut failures = Vec::new();
        for &x in &ur_e {
            for &y in &self.f_unit_regular {
                if unit_regular_lookup(&self.ring, self.ring.add(x, y)).is_none() {
                    failures.push((x, y));
                }
            }
        }
        (ur_e.len() * self.f_unit_regular.len(), failures)
    }
}

/// Evaluate one condition for `(R, e, a)`.
pub fn condition_check(
    ring: &FiniteRing,
    idempotent: Idempotent,
    a: Element,
    which: Condition,
) -> Result<ConditionOutcome, EngineError> {
    CornerSetting::new(ring, idempotent).condition_check(a, which)
}

/// One verdict per `a` in `eRe`. Any verdict whose equivalent conditions
/// disagree, whose witnesses fail re-verification, or which breaks an
/// implication of [`CHAIN`] aborts the sweep with a [`ReproBundle`].
pub fn verify_equivalences(ring: &FiniteRing, idempotent: Idempotent) -> Result<Vec<VerdictReport>, EngineError> {
    let verdicts = CornerSetting::new(ring, idempotent).verdicts()?;
    if let Some(bundle) = find_unsound(&verdicts) {
        return Err(EngineError::Inconsistent(Box::new(bundle)));
    }
    Ok(verdicts)
}

pub fn corner_witness_from_global(
    ring: &FiniteRing,
    idempotent: Idempotent,
    a: Element,
    b: Element,
    u: Element,
    v: Option<Element>,
) -> Result<CornerWitness, EngineError> {
    CornerSetting::new(ring, idempotent).extract(a, b, u, v)
}

pub fn corner_one_sided_witness(
    ring: &FiniteRing,
    idempotent: Idempotent,
    a: Element,
    b: Element,
    u: Element,
    v: Option<Element>,
    side: Side,
) -> Result<OneSidedWitness, EngineError> {
    CornerSetting::new(ring, idempotent).extract_one_sided(a, b, u, v, side)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CornerStarReport {
    pub e: Element,
    pub corner_size: usize,
    pub corner_unit_regular_count: usize,
    /// Elements of `ur(eRe)` lifted to a global unit `w + f`.
    pub star_checked: usize,
    pub star_failures: Vec<Element>,
    /// Set only when the ambient ring is unit regular: whether every corner
    /// element was shown unit regular through `a + f` and extraction.
    pub corner_unit_regular: Option<bool>,
    pub corollary_failures: Vec<Element>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarCorollaryReport {
    pub ring: String,
    pub unit_regular_ring: bool,
    pub corners: Vec<CornerStarReport>,
}

impl StarCorollaryReport {
    pub fn passed(&self) -> bool {
        self.corners.iter().all(|c| {
            c.star_failures.is_empty()
                && c.corollary_failures.is_empty()
                && (!self.unit_regular_ring || c.corner_unit_regular == Some(true))
        })
    }
}

/// Check that `ur(eRe)` lies in `ur(R)` for every idempotent, and that every
/// corner of a unit regular ring is unit regular, building each corner unit
/// from a global witness for `a + f`.
pub fn verify_star_and_corollary(ring: &FiniteRing) -> StarCorollaryReport {
    let unit_regular_ring = ur_set(ring).unit_regular_ring;
    let corners = ring
        .idempotents()
        .par_iter()
        .map(|&idem| {
            let setting = CornerSetting::new(ring, idem);
            let corner = setting.corner_e();
            let f = idem.f();
            let one = ring.one();
            let corner_ur = ur_set(corner).elements;

            let star_failures: Vec<Element> = corner_ur
                .iter()
                .copied()
                .filter(|&a| {
                    let (w, w_inv) = unit_regular_lookup(corner, a).expect("listed in ur(eRe)");
                    let (u, u_inv) = (ring.add(w, f), ring.add(w_inv, f));
                    let lifted = ring.mul(u, u_inv) == one
                        && ring.mul(u_inv, u) == one
                        && ring.product(&[a, u, a]) == a
                        && ring.is_unit(u) == Some(u_inv);
                    !(lifted && unit_regular_lookup(ring, a).is_some())
                })
                .collect();

            let (corner_unit_regular, corollary_failures) = if unit_regular_ring {
                let failures: Vec<Element> = corner
                    .carrier()
                    .iter()
                    .copied()
                    .filter(|&a| {
                        let Some((u, u_inv)) = unit_regular_lookup(ring, ring.add(a, f)) else { return true };
                        !matches!(setting.extract(a, f, u, Some(u_inv)), Ok(w) if w.checks.all())
                    })
                    .collect();
                let all = failures.is_empty() && corner_ur.len() == corner.len();
                (Some(all), failures)
            } else {
                (None, Vec::new())
            };

            CornerStarReport {
                e: idem.e(),
                corner_size: corner.len(),
                corner_unit_regular_count: corner_ur.len(),
                star_checked: corner_ur.len(),
                star_failures,
                corner_unit_regular,
                corollary_failures,
            }
        })
        .collect();
    StarCorollaryReport { ring: ring.name(), unit_regular_ring, corners }
}

/// Base ring `S` for the `M2(S)` scaffold.
pub enum CounterexampleBase<'a> {
    /// A finite ring with `s = s t s`.
    Finite { ring: &'a FiniteRing, s: Element, t: Element },
    /// Banded operators over the two-element field with `s` the right shift
    /// and `t` the left shift.
    Shift,
}

/// Whether `a = [[s,0],[0,0]]` is unit regular in the corner `eRe`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "decision", rename_all = "kebab-case")]
pub enum CornerMembership {
    UnitRegular { corner_unit: String, corner_unit_inverse: String },
    NotUnitRegular,
    Undecided { evidence: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScaffoldReport {
    pub base: String,
    pub s: String,
    pub t: String,
    pub a: String,
    pub u: String,
    pub v: String,
    pub aua_equals_a: bool,
    pub uv_identity: bool,
    pub vu_identity: bool,
    pub corner_membership: CornerMembership,
}

impl ScaffoldReport {
    pub fn identities_hold(&self) -> bool {
        self.aua_equals_a && self.uv_identity && self.vu_identity
    }
}

fn matrix_label(ring: &FiniteRing, x: Element) -> String {
    let k = ring.matrix_dim().unwrap_or(1);
    let entries = ring.matrix_entries(x).unwrap_or_else(|_| vec![x]);
    let rows: Vec<String> = entries
        .chunks(k)
        .map(|row| format!("[{}]", row.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

/// Build `a = [[s,0],[0,0]]`, `u = [[t,1],[1,0]]`, `v = [[0,1],[1,-t]]` in
/// `M2(S)` and check `a u a = a`, `u v = v u = 1`. For finite `S` also decide
/// whether `a` is unit regular in `eRe` for `e = [[1,0],[0,0]]`.
pub fn build_m2_counterexample(base: CounterexampleBase<'_>, limits: &Limits) -> Result<ScaffoldReport, EngineError> {
    match base {
        CounterexampleBase::Finite { ring: s_ring, s, t } => {
            s_ring.check(s)?;
            s_ring.check(t)?;
            if s_ring.product(&[s, t, s]) != s {
                return Err(EngineError::NotInnerInverse { s: s.to_string(), t: t.to_string() });
            }
            let m2 = make_matrix_ring(2, s_ring, limits)?;
            let (zero, one) = (Element::ZERO, s_ring.one());
            let a = m2.matrix_from_entries(&[s, zero, zero, zero])?;
            let u = m2.matrix_from_entries(&[t, one, one, zero])?;
            let v = m2.matrix_from_entries(&[zero, one, one, s_ring.neg(t)])?;
            let e = m2.matrix_from_entries(&[one, zero, zero, zero])?;
            let idem = Idempotent::new(&m2, e)?;
            let corner = corner_ring(&m2, idem);
            let corner_membership = match unit_regular_lookup(&corner, a) {
                Some((w, w_inv)) => CornerMembership::UnitRegular {
                    corner_unit: matrix_label(&m2, w),
                    corner_unit_inverse: matrix_label(&m2, w_inv),
                },
                None => CornerMembership::NotUnitRegular,
            };
            Ok(ScaffoldReport {
                base: s_ring.name(),
                s: s.to_string(),
                t: t.to_string(),
                a: matrix_label(&m2, a),
                u: matrix_label(&m2, u),
                v: matrix_label(&m2, v),
                aua_equals_a: m2.product(&[a, u, a]) == a,
                uv_identity: m2.mul(u, v) == m2.one(),
                vu_identity: m2.mul(v, u) == m2.one(),
                corner_membership,
            })
        }
        CounterexampleBase::Shift => {
            let ids = shift::CounterexampleIdentities::compute();
            let (kernel, cokernel) = shift::shift_truncation_dims(8);
            Ok(ScaffoldReport {
                base: "End(F2^(N))".into(),
                s: "right shift".into(),
                t: "left shift".into(),
                a: "[[s,0],[0,0]]".into(),
                u: "[[t,1],[1,0]]".into(),
                v: "[[0,1],[1,t]]".into(),
                aua_equals_a: ids.aua_equals_a,
                uv_identity: ids.uv_identity,
                vu_identity: ids.vu_identity,
                corner_membership: CornerMembership::Undecided {
                    evidence: format!(
                        "s is injective with a one-dimensional cokernel on truncations (dim ker = {kernel}, dim coker = {cokernel} at N = 8); \
                         by the classical kernel/cokernel criterion, cited and not re-proved, s is not unit regular"
                    ),
                },
            })
        }
    }
}
