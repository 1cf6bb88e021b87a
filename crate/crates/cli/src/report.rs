//! Report documents and their JSON form. Field order in the structs below is
//! the key order in the output.

use serde::Serialize;
use urcorner::{
    AxiomReport, Condition, CornerWitness, Element, Precondition, RegularityKind, ReproBundle, ScaffoldReport,
    ShiftDemoReport, StarCorollaryReport, VerdictReport,
};

pub const SCHEMA_VERSION: &str = "1.0.0";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Capped,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Capped => 3,
        }
    }

    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// Wall-clock envelope, kept outside the payload so documents compare equal
/// across runs once it is dropped.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub schema_version: &'static str,
    pub command: Vec<String>,
    pub ring: Option<String>,
    pub status: Status,
    pub payload: Payload,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Classify(ClassifyPayload),
    VerifyTheorem(TheoremPayload),
    Witness(WitnessPayload),
    ShiftDemo(ShiftPayload),
    Family(FamilyPayload),
    Capped(CappedPayload),
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitRow {
    pub u: Element,
    pub inverse: Element,
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementRow {
    pub a: Element,
    pub kind: RegularityKind,
    pub t: Option<Element>,
    pub u: Option<Element>,
    pub partner: Option<Element>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyPayload {
    pub size: u32,
    pub units: Vec<UnitRow>,
    pub idempotents: Vec<Element>,
    pub regular: Vec<Element>,
    pub unit_regular: Vec<Element>,
    pub unit_regular_ring: bool,
    pub elements: Vec<ElementRow>,
    pub witnesses_verified: bool,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConditionCount {
    pub condition: Condition,
    pub holds: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CornerBlock {
    pub e: Element,
    pub f: Element,
    pub corner_size: usize,
    pub counts: Vec<ConditionCount>,
    /// Verdicts where (1), (2), (3), (3'), (4), (5) disagree.
    pub mismatches: usize,
    pub chain_violations: usize,
    pub unverified_witnesses: usize,
    pub sound: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdicts: Option<Vec<VerdictReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repro: Option<ReproBundle>,
}

impl CornerBlock {
    pub fn from_verdicts(e: Element, f: Element, verdicts: Vec<VerdictReport>, keep: bool) -> Self {
        let counts = Condition::ALL
            .iter()
            .map(|&c| ConditionCount { condition: c, holds: verdicts.iter().filter(|v| v.holds(c)).count() })
            .collect();
        let repro = urcorner::find_unsound(&verdicts);
        CornerBlock {
            e,
            f,
            corner_size: verdicts.len(),
            counts,
            mismatches: verdicts.iter().filter(|v| !v.equivalents_agree()).count(),
            chain_violations: verdicts.iter().map(|v| v.chain_violations().len()).sum(),
            unverified_witnesses: verdicts.iter().filter(|v| !v.witnesses_verified).count(),
            sound: repro.is_none(),
            verdicts: keep.then_some(verdicts),
            repro,
        }
    }

    pub fn count(&self, c: Condition) -> usize {
        self.counts.iter().find(|k| k.condition == c).map_or(0, |k| k.holds)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremPayload {
    /// Absent when the ring is above the axiom cap.
    pub axioms: Option<AxiomReport>,
    pub corners: Vec<CornerBlock>,
    pub star_corollary: Option<StarCorollaryReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessPayload {
    pub e: Element,
    pub f: Element,
    pub a: Element,
    pub b: Element,
    pub u: Element,
    pub v: Option<Element>,
    pub witness: Option<CornerWitness>,
    pub preconditions: Vec<Precondition>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftPayload {
    pub demo: ShiftDemoReport,
    pub scaffold: ScaffoldReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyRing {
    pub ring: String,
    pub size: u32,
    pub units: usize,
    pub idempotents: usize,
    pub axioms_passed: bool,
    pub unit_regular_ring: bool,
    pub star_corollary_passed: bool,
    pub corners: Vec<CornerBlock>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyPayload {
    pub rings: Vec<FamilyRing>,
    pub scaffold: ScaffoldReport,
    pub shift: ShiftDemoReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct CappedPayload {
    /// Decimal string; may exceed 64 bits.
    pub cardinality: String,
    pub cap: u64,
    pub message: String,
}

pub fn to_json(doc: &ReportDocument) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("report types always serialize");
    out.push('\n');
    out
}
