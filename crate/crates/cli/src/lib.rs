//! Command-line frontend: parses ring specs, runs the verifiers and emits
//! report documents.

mod human;
pub mod report;

use std::time::Instant;

use clap::{Parser, Subcommand};
use urcorner::theorem::CornerSetting;
use urcorner::{
    build_m2_counterexample, check_ring_axioms, classify, parse_ring_spec, regular_set, run_shift_demo, ur_set,
    verify_star_and_corollary, CounterexampleBase, Element, EngineError, FiniteRing, Idempotent, Limits, RingError,
    CURATED_FAMILY, DEFAULT_AXIOM_CAP, DEFAULT_SIZE_CAP,
};

use report::{
    CappedPayload, ClassifyPayload, CornerBlock, ElementRow, FamilyPayload, FamilyRing, Payload, ReportDocument,
    ShiftPayload, Status, TheoremPayload, Timing, UnitRow, WitnessPayload, SCHEMA_VERSION,
};

pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "urcorner", version, about = "Explore units and idempotent corners of small finite rings")]
struct Cli {
    /// Emit the JSON report instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Leave the timing envelope out of the report.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Largest ring that may be built.
    #[arg(long, global = true, env = "URCORNER_SIZE_CAP")]
    size_cap: Option<u64>,
    /// Largest ring on which the cubic axiom check runs.
    #[arg(long, global = true, env = "URCORNER_AXIOM_CAP")]
    axiom_cap: Option<u64>,
    /// Flip one verdict before the soundness check (test fixture).
    #[arg(long, global = true, hide = true)]
    inject_fault: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Units, idempotents, regular and unit regular elements.
    Classify {
        #[arg(long)]
        ring: String,
    },
    /// Decide the corner conditions for every element of each corner.
    VerifyTheorem {
        #[arg(long)]
        ring: String,
        /// `all` or the code of one idempotent.
        #[arg(long, default_value = "all")]
        idempotent: String,
    },
    /// Extract a unit of eRe from a unit regular decomposition of a + b.
    Witness {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        u: u32,
        #[arg(long)]
        v: Option<u32>,
    },
    /// Shift operators over F2 and the infinite counterexample.
    ShiftDemo {
        #[arg(long, default_value_t = 32)]
        truncation: u64,
    },
    /// Run the whole curated suite.
    Family,
}

/// Result of one invocation. `stdout` already holds the rendered document.
#[derive(Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub document: Option<ReportDocument>,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: String) -> Self {
        Outcome { exit_code: EXIT_USAGE, document: None, stdout: String::new(), stderr: message }
    }
}

enum Failure {
    Usage(String),
    Capped(RingError),
}

impl From<RingError> for Failure {
    fn from(e: RingError) -> Self {
        match e {
            RingError::CapExceeded { .. } => Failure::Capped(e),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Ring(r) => r.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

struct Context {
    limits: Limits,
    inject_fault: bool,
}

impl Context {
    fn ring(&self, spec: &str) -> Result<FiniteRing, Failure> {
        let parsed = parse_ring_spec(spec).map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(parsed.instantiate(&self.limits)?)
    }

    fn element(&self, ring: &FiniteRing, code: u32) -> Result<Element, Failure> {
        Ok(ring.element(code)?)
    }

    fn idempotent(&self, ring: &FiniteRing, code: u32) -> Result<Idempotent, Failure> {
        let e = self.element(ring, code)?;
        Ok(Idempotent::new(ring, e)?)
    }

    /// Verdict blocks for the chosen idempotents. With fault injection the
    /// first verdict of the first block has condition (2) flipped.
    fn corner_blocks(&self, ring: &FiniteRing, idems: &[Idempotent], keep: bool) -> Result<Vec<CornerBlock>, Failure> {
        let mut blocks = Vec::with_capacity(idems.len());
        for (i, &idem) in idems.iter().enumerate() {
            let mut verdicts = CornerSetting::new(ring, idem).verdicts()?;
            if self.inject_fault && i == 0 {
                if let Some(v) = verdicts.first_mut() {
                    v.cond2.holds = !v.cond2.holds;
                    v.consistent = v.equivalents_agree();
                }
            }
            blocks.push(CornerBlock::from_verdicts(idem.e(), idem.f(), verdicts, keep));
        }
        Ok(blocks)
    }

    fn classify(&self, spec: &str) -> Result<(Option<String>, Status, Payload), Failure> {
        let ring = self.ring(spec)?;
        let elements: Vec<ElementRow> = ring
            .elements()
            .map(|a| {
                let w = classify(&ring, a);
                ElementRow { a, kind: w.kind, t: w.t, u: w.u, partner: w.u_partner }
            })
            .collect();
        let witnesses_verified = elements.iter().all(|r| {
            urcorner::RegularityWitness { kind: r.kind, t: r.t, u: r.u, u_partner: r.partner }.verify(&ring, r.a)
        });
        let ur = ur_set(&ring);
        let payload = ClassifyPayload {
            size: ring.size(),
            units: ring.unit_group().pairs().iter().map(|&(u, inverse)| UnitRow { u, inverse }).collect(),
            idempotents: ring.idempotents().iter().map(|i| i.e()).collect(),
            regular: regular_set(&ring),
            unit_regular: ur.elements,
            unit_regular_ring: ur.unit_regular_ring,
            elements,
            witnesses_verified,
        };
        Ok((Some(ring.name()), Status::from_pass(witnesses_verified), Payload::Classify(payload)))
    }

    fn verify_theorem(&self, spec: &str, which: &str) -> Result<(Option<String>, Status, Payload), Failure> {
        let ring = self.ring(spec)?;
        let idems: Vec<Idempotent> = if which.eq_ignore_ascii_case("all") {
            ring.idempotents().to_vec()
        } else {
            let code = which
                .parse::<u32>()
                .map_err(|_| Failure::Usage(format!("--idempotent expects `all` or a code, got `{which}`")))?;
            vec![self.idempotent(&ring, code)?]
        };
        let axioms = check_ring_axioms(&ring, &self.limits).ok();
        let axioms_ok = axioms.as_ref().is_none_or(|a| a.passed());
        let (corners, star_corollary) = if axioms_ok {
            (self.corner_blocks(&ring, &idems, true)?, Some(verify_star_and_corollary(&ring)))
        } else {
            (Vec::new(), None)
        };
        let pass = axioms_ok && corners.iter().all(|b| b.sound) && star_corollary.as_ref().is_some_and(|s| s.passed());
        let payload = TheoremPayload { axioms, corners, star_corollary };
        Ok((Some(ring.name()), Status::from_pass(pass), Payload::VerifyTheorem(payload)))
    }

    fn witness(
        &self,
        spec: &str,
        codes: [u32; 4],
        v: Option<u32>,
    ) -> Result<(Option<String>, Status, Payload), Failure> {
        let ring = self.ring(spec)?;
        let idem = self.idempotent(&ring, codes[0])?;
        let [a, b, u] = [codes[1], codes[2], codes[3]].map(|c| self.element(&ring, c));
        let (a, b, u) = (a?, b?, u?);
        let v = v.map(|c| self.element(&ring, c)).transpose()?;
        let (witness, preconditions) = match CornerSetting::new(&ring, idem).extract(a, b, u, v) {
            Ok(w) => (Some(w), Vec::new()),
            Err(EngineError::Preconditions(p)) => (None, p),
            Err(other) => return Err(other.into()),
        };
        let pass = witness.as_ref().is_some_and(|w| w.checks.all() && w.identities.all());
        let payload = WitnessPayload { e: idem.e(), f: idem.f(), a, b, u, v, witness, preconditions };
        Ok((Some(ring.name()), Status::from_pass(pass), Payload::Witness(payload)))
    }

    fn shift_demo(&self, truncation: u64) -> Result<(Option<String>, Status, Payload), Failure> {
        let demo = run_shift_demo(truncation).map_err(|e| Failure::Usage(e.to_string()))?;
        let scaffold = build_m2_counterexample(CounterexampleBase::Shift, &self.limits)?;
        let pass = demo.passed() && scaffold.identities_hold();
        Ok((None, Status::from_pass(pass), Payload::ShiftDemo(ShiftPayload { demo, scaffold })))
    }

    fn family(&self) -> Result<(Option<String>, Status, Payload), Failure> {
        let mut rings = Vec::with_capacity(CURATED_FAMILY.len());
        let mut pass = true;
        for (i, spec) in CURATED_FAMILY.iter().enumerate() {
            let ring = self.ring(spec)?;
            let axioms_passed = check_ring_axioms(&ring, &self.limits).map_or(true, |r| r.passed());
            let ctx = Context { limits: self.limits, inject_fault: self.inject_fault && i == 0 };
            let corners = if axioms_passed { ctx.corner_blocks(&ring, ring.idempotents(), false)? } else { Vec::new() };
            let star = verify_star_and_corollary(&ring);
            pass &= axioms_passed && star.passed() && corners.iter().all(|b| b.sound);
            rings.push(FamilyRing {
                ring: ring.name(),
                size: ring.size(),
                units: ring.unit_group().len(),
                idempotents: ring.idempotents().len(),
                axioms_passed,
                unit_regular_ring: star.unit_regular_ring,
                star_corollary_passed: star.passed(),
                corners,
            });
        }
        let z4 = self.ring("Z4")?;
        let three = self.element(&z4, 3)?;
        let scaffold =
            build_m2_counterexample(CounterexampleBase::Finite { ring: &z4, s: three, t: three }, &self.limits)?;
        let shift = run_shift_demo(8).map_err(|e| Failure::Usage(e.to_string()))?;
        pass &= scaffold.identities_hold() && shift.passed();
        Ok((None, Status::from_pass(pass), Payload::Family(FamilyPayload { rings, scaffold, shift })))
    }
}

/// Run one invocation. `argv` excludes the program name.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("urcorner".to_string()).chain(args.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { exit_code: 0, document: None, stdout: text, stderr: String::new() }
                }
                _ => Outcome::usage(text),
            };
        }
    };
    let ctx = Context {
        limits: Limits {
            size_cap: cli.size_cap.unwrap_or(DEFAULT_SIZE_CAP),
            axiom_cap: cli.axiom_cap.unwrap_or(DEFAULT_AXIOM_CAP),
        },
        inject_fault: cli.inject_fault,
    };
    let start = Instant::now();
    let result = match &cli.command {
        Command::Classify { ring } => ctx.classify(ring),
        Command::VerifyTheorem { ring, idempotent } => ctx.verify_theorem(ring, idempotent),
        Command::Witness { ring, e, a, b, u, v } => ctx.witness(ring, [*e, *a, *b, *u], *v),
        Command::ShiftDemo { truncation } => ctx.shift_demo(*truncation),
        Command::Family => ctx.family(),
    };
    let (ring, status, payload) = match result {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => return Outcome::usage(format!("error: {msg}\n")),
        Err(Failure::Capped(err)) => {
            let RingError::CapExceeded { cardinality, cap } = err else {
                unreachable!("only cap errors are routed here")
            };
            let ring = match &cli.command {
                Command::Classify { ring } | Command::VerifyTheorem { ring, .. } | Command::Witness { ring, .. } => {
                    Some(ring.clone())
                }
                _ => None,
            };
            let message = err.to_string();
            (
                ring,
                Status::Capped,
                Payload::Capped(CappedPayload { cardinality: cardinality.to_string(), cap, message }),
            )
        }
    };
    let timing = (!cli.no_timing).then(|| Timing { elapsed_ms: start.elapsed().as_secs_f64() * 1e3 });
    let doc = ReportDocument { schema_version: SCHEMA_VERSION, command: args, ring, status, payload, timing };
    let stdout = if cli.json { report::to_json(&doc) } else { human::render(&doc) };
    Outcome { exit_code: status.exit_code(), document: Some(doc), stdout, stderr: String::new() }
}
