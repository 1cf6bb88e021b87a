//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; exits non-zero if any fails.
//!
//! Each criterion recomputes its expected values from the definitions with a
//! brute-force oracle in this file and compares against the library.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use serde_json::Value;
use urcorner::theorem::{CornerSetting, CHAIN};
use urcorner::{
    build_m2_counterexample, corner_witness_from_global, parse_ring_spec, run_shift_demo, ur_set,
    verify_star_and_corollary, Condition, CornerMembership, CounterexampleBase, Element, EngineError, FiniteRing,
    Limits, VerdictReport, CURATED_FAMILY,
};

fn ring(spec: &str) -> FiniteRing {
    parse_ring_spec(spec).unwrap().instantiate(&Limits::default()).unwrap()
}

fn el(c: u32) -> Element {
    Element::from_code(c)
}

/// Everything about one corner pair, recomputed by scanning.
struct Oracle {
    corner_e: Vec<Element>,
    corner_f: Vec<Element>,
    ur_e: BTreeSet<Element>,
    units_f: Vec<Element>,
    ur_f: Vec<Element>,
    nzd_f: Vec<Element>,
}

fn sandwich(r: &FiniteRing, e: Element) -> Vec<Element> {
    r.elements().filter(|&x| r.product(&[e, x, e]) == x).collect()
}

fn units_in(r: &FiniteRing, carrier: &[Element], one: Element) -> Vec<Element> {
    carrier.iter().copied().filter(|&u| carrier.iter().any(|&v| r.mul(u, v) == one && r.mul(v, u) == one)).collect()
}

fn ur_in(r: &FiniteRing, carrier: &[Element], units: &[Element]) -> Vec<Element> {
    carrier.iter().copied().filter(|&a| units.iter().any(|&u| r.product(&[a, u, a]) == a)).collect()
}

fn non_zero_divisors(r: &FiniteRing, carrier: &[Element]) -> Vec<Element> {
    let zero = r.zero();
    carrier
        .iter()
        .copied()
        .filter(|&b| carrier.iter().all(|&c| c == zero || (r.mul(b, c) != zero && r.mul(c, b) != zero)))
        .collect()
}

impl Oracle {
    fn new(r: &FiniteRing, e: Element, f: Element) -> Self {
        let corner_e = sandwich(r, e);
        let corner_f = sandwich(r, f);
        let units_e = units_in(r, &corner_e, e);
        let units_f = units_in(r, &corner_f, f);
        let ur_e = ur_in(r, &corner_e, &units_e).into_iter().collect();
        let ur_f = ur_in(r, &corner_f, &units_f);
        let nzd_f = non_zero_divisors(r, &corner_f);
        Oracle { corner_e, corner_f, ur_e, units_f, ur_f, nzd_f }
    }

    fn conditions(&self, r: &FiniteRing, ur_r: &BTreeSet<Element>, f: Element, a: Element) -> [bool; 7] {
        let in_ur = |b: &Element| ur_r.contains(&r.add(a, *b));
        [
            self.ur_e.contains(&a),
            ur_r.contains(&r.add(a, f)),
            self.units_f.iter().all(in_ur),
            self.units_f.iter().any(in_ur),
            self.ur_f.iter().all(in_ur),
            self.ur_f.iter().any(in_ur),
            self.nzd_f.iter().any(in_ur),
        ]
    }
}

fn global_ur(r: &FiniteRing) -> BTreeSet<Element> {
    let all: Vec<Element> = r.elements().collect();
    let units = units_in(r, &all, r.one());
    ur_in(r, &all, &units).into_iter().collect()
}

struct Verdicts {
    reports: Vec<VerdictReport>,
    oracle_mismatches: usize,
    elapsed: Duration,
}

fn family_verdicts() -> Verdicts {
    let start = Instant::now();
    let mut reports = Vec::new();
    let mut oracle_mismatches = 0;
    for spec in CURATED_FAMILY {
        let r = ring(spec);
        let ur_r = global_ur(&r);
        for &idem in r.idempotents() {
            let verdicts = CornerSetting::new(&r, idem).verdicts().unwrap();
            let oracle = Oracle::new(&r, idem.e(), idem.f());
            assert_eq!(verdicts.iter().map(|v| v.a).collect::<Vec<_>>(), oracle.corner_e);
            for v in &verdicts {
                let expected = oracle.conditions(&r, &ur_r, idem.f(), v.a);
                let got = Condition::ALL.map(|c| v.holds(c));
                if expected != got {
                    oracle_mismatches += 1;
                    eprintln!(
                        "  oracle disagrees: {} e={} a={} expected {expected:?} got {got:?}",
                        spec,
                        idem.e(),
                        v.a
                    );
                }
            }
            reports.extend(verdicts);
        }
    }
    Verdicts { reports, oracle_mismatches, elapsed: start.elapsed() }
}

fn criterion_1(v: &Verdicts) -> Result<String, String> {
    let mismatches = v.reports.iter().filter(|r| !r.equivalents_agree() || !r.consistent).count();
    let unverified = v.reports.iter().filter(|r| !r.witnesses_verified).count();
    let detail = format!(
        "{} verdicts over {} rings, {} equivalence mismatches, {} oracle disagreements, {} unverified witnesses, {:.2} s",
        v.reports.len(),
        CURATED_FAMILY.len(),
        mismatches,
        v.oracle_mismatches,
        unverified,
        v.elapsed.as_secs_f64()
    );
    let ok = mismatches == 0 && v.oracle_mismatches == 0 && unverified == 0 && v.elapsed < Duration::from_secs(300);
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_2(v: &Verdicts) -> Result<String, String> {
    let mut violations = 0;
    for r in &v.reports {
        for imp in CHAIN {
            if r.holds(imp.from) && !r.holds(imp.to) {
                violations += 1;
            }
        }
    }
    let detail = format!(
        "{} implications checked on {} verdicts, {} violations",
        CHAIN.len() * v.reports.len(),
        v.reports.len(),
        violations
    );
    if violations == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Oracle for the extraction hypotheses: a in eRe, b in fRf with no zero
/// divisors, (a+b)u(a+b) = a+b, (uv-1)e = 0, e(vu-1) = 0.
fn hypotheses(r: &FiniteRing, o: &Oracle, e: Element, a: Element, b: Element, u: Element, v: Element) -> bool {
    let x = r.add(a, b);
    let one = r.one();
    o.corner_e.contains(&a)
        && o.nzd_f.contains(&b)
        && r.product(&[x, u, x]) == x
        && r.mul(r.sub(r.mul(u, v), one), e) == r.zero()
        && r.mul(e, r.sub(r.mul(v, u), one)) == r.zero()
}

/// Recompute u' and v' from the formulas and check the three conclusions.
fn conclusions(r: &FiniteRing, e: Element, a: Element, b: Element, u: Element, v: Element) -> (Element, Element, bool) {
    let ubu = r.product(&[u, b, u]);
    let u_prime = r.product(&[e, r.sub(u, ubu), e]);
    let v_prime = r.product(&[e, v, e]);
    let ok = r.product(&[a, u_prime, a]) == a && r.mul(u_prime, v_prime) == e && r.mul(v_prime, u_prime) == e;
    (u_prime, v_prime, ok)
}

fn criterion_3() -> Result<String, String> {
    let mut tuples = 0;
    let mut failures = Vec::new();
    for spec in ["Z6", "Z8", "T2(Z2)", "M2(Z2)"] {
        let r = ring(spec);
        let units = r.unit_group().pairs().to_vec();
        for &idem in r.idempotents() {
            let (e, f) = (idem.e(), idem.f());
            let o = Oracle::new(&r, e, f);
            let setting = CornerSetting::new(&r, idem);
            for &a in &o.corner_e {
                for &b in &o.corner_f {
                    for &(u, u_inv) in &units {
                        let valid = hypotheses(&r, &o, e, a, b, u, u_inv);
                        let got = setting.extract(a, b, u, None);
                        match (valid, got) {
                            (true, Ok(w)) => {
                                tuples += 1;
                                let (up, vp, ok) = conclusions(&r, e, a, b, u, u_inv);
                                let one = r.one();
                                let proof = r.mul(r.sub(one, r.mul(b, u)), f) == r.zero()
                                    && r.mul(e, r.sub(one, r.mul(u, b))) == r.sub(one, r.mul(u, b))
                                    && r.mul(b, e) == r.zero()
                                    && r.product(&[a, u, a]) == a
                                    && r.product(&[b, u, b]) == b
                                    && r.product(&[b, u, a]) == r.zero()
                                    && r.product(&[a, u, b]) == r.zero();
                                if !(ok
                                    && proof
                                    && w.checks.all()
                                    && w.identities.all()
                                    && (w.u_prime, w.v_prime) == (up, vp))
                                {
                                    failures.push(format!("{spec} e={e} a={a} b={b} u={u}"));
                                }
                            }
                            (false, Err(EngineError::Preconditions(_))) => {}
                            (valid, got) => {
                                failures.push(format!("{spec} e={e} a={a} b={b} u={u}: oracle {valid}, engine {got:?}"))
                            }
                        }
                    }
                }
            }
        }
    }
    let detail = format!("{tuples} precondition-satisfying tuples, {} failures", failures.len());
    if failures.is_empty() && tuples > 0 {
        Ok(detail)
    } else {
        Err(format!("{detail}; first: {:?}", failures.first()))
    }
}

fn criterion_4() -> Result<String, String> {
    let (mut tuples, mut non_inverse, mut non_unit) = (0, 0, 0);
    let mut failures = Vec::new();
    for spec in ["Z6", "M2(Z2)"] {
        let r = ring(spec);
        for &idem in r.idempotents() {
            let e = idem.e();
            let o = Oracle::new(&r, e, idem.f());
            let setting = CornerSetting::new(&r, idem);
            for &a in &o.corner_e {
                for &b in &o.nzd_f {
                    let x = r.add(a, b);
                    for u in r.elements().filter(|&u| r.product(&[x, u, x]) == x) {
                        for v in r.elements() {
                            if !hypotheses(&r, &o, e, a, b, u, v) {
                                continue;
                            }
                            tuples += 1;
                            let inverse = r.is_unit(u);
                            if inverse != Some(v) {
                                non_inverse += 1;
                            }
                            if inverse.is_none() {
                                non_unit += 1;
                            }
                            let (_, _, ok) = conclusions(&r, e, a, b, u, v);
                            match setting.extract(a, b, u, Some(v)) {
                                Ok(w) if ok && w.checks.all() => {}
                                other => failures.push(format!("{spec} e={e} a={a} b={b} u={u} v={v}: {other:?}")),
                            }
                        }
                    }
                }
            }
        }
    }
    let detail = format!(
        "{tuples} (u, v) tuples under the weakened hypotheses ({non_inverse} with v != u^-1, {non_unit} with u not a unit), {} failures",
        failures.len()
    );
    if failures.is_empty() && tuples > 0 {
        Ok(detail)
    } else {
        Err(format!("{detail}; first: {:?}", failures.first()))
    }
}

fn criterion_5() -> Result<String, String> {
    let mut corners = 0;
    let mut problems = Vec::new();
    for spec in ["M2(Z2)", "M2(Z3)", "Z2xZ3"] {
        let r = ring(spec);
        let ur_r = global_ur(&r);
        if ur_r.len() != r.size() as usize || !ur_set(&r).unit_regular_ring {
            problems.push(format!("{spec} is not unit regular by exhaustion"));
            continue;
        }
        let report = verify_star_and_corollary(&r);
        if !report.passed() {
            problems.push(format!("{spec}: star/corollary report failed"));
        }
        for &idem in r.idempotents() {
            corners += 1;
            let f = idem.f();
            for a in sandwich(&r, idem.e()) {
                let x = r.add(a, f);
                let u = r.unit_group().units().find(|&u| r.product(&[x, u, x]) == x);
                let ok = u.is_some_and(
                    |u| matches!(corner_witness_from_global(&r, idem, a, f, u, None), Ok(w) if w.checks.all()),
                );
                if !ok {
                    problems.push(format!("{spec} e={} a={a}", idem.e()));
                }
            }
        }
    }
    let detail = format!("{corners} corners of 3 unit regular rings, {} failures", problems.len());
    if problems.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; first: {:?}", problems.first()))
    }
}

fn criterion_6() -> Result<String, String> {
    // plain integer scans
    let ur_z4: Vec<u32> = (0..4u32).filter(|&a| [1u32, 3].iter().any(|&u| a * u * a % 4 == a)).collect();
    let m2 = |x: u32| [x >> 3 & 1, x >> 2 & 1, x >> 1 & 1, x & 1];
    let mul = |x: [u32; 4], y: [u32; 4]| {
        [
            (x[0] * y[0] + x[1] * y[2]) % 2,
            (x[0] * y[1] + x[1] * y[3]) % 2,
            (x[2] * y[0] + x[3] * y[2]) % 2,
            (x[2] * y[1] + x[3] * y[3]) % 2,
        ]
    };
    let id = [1, 0, 0, 1];
    let units = (0..16).filter(|&x| (0..16).any(|y| mul(m2(x), m2(y)) == id && mul(m2(y), m2(x)) == id)).count();
    let idempotents = (0..16).filter(|&x| mul(m2(x), m2(x)) == m2(x)).count();
    let t2 = |x: [u32; 3], y: [u32; 3]| [x[0] * y[0] % 2, (x[0] * y[1] + x[1] * y[2]) % 2, x[2] * y[2] % 2];
    let e12_regular = (0..8u32).any(|c| t2(t2([0, 1, 0], [c >> 2, c >> 1 & 1, c & 1]), [0, 1, 0]) == [0, 1, 0]);

    let lib_ur: Vec<u32> = ur_set(&ring("Z4")).elements.iter().map(|e| e.code()).collect();
    let m2z2 = ring("M2(Z2)");
    let t = ring("T2(Z2)");
    let e12 = t.matrix_from_entries(&[el(0), el(1), el(0), el(0)]).unwrap();
    let lib_e12 = urcorner::regular_witness(&t, e12).is_some();

    let checks = [
        ur_z4 == vec![0, 1, 3] && lib_ur == ur_z4,
        units == 6 && m2z2.unit_group().len() == 6,
        idempotents == 8 && m2z2.idempotents().len() == 8,
        !e12_regular && !lib_e12,
    ];
    let detail = format!(
        "ur(Z4) = {lib_ur:?}, |U(M2(Z2))| = {}, |idempotents(M2(Z2))| = {}, e12 regular: {lib_e12}",
        m2z2.unit_group().len(),
        m2z2.idempotents().len()
    );
    if checks.iter().all(|&c| c) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Rank over GF(2) of the (N+1) x N matrix of the right shift on span(e_0..e_{N-1}).
fn shift_dims_by_elimination(n: usize) -> (usize, usize) {
    let mut rows: Vec<Vec<u8>> = (0..=n).map(|i| (0..n).map(|j| u8::from(i == j + 1)).collect()).collect();
    let mut rank = 0;
    for col in 0..n {
        if let Some(p) = (rank..rows.len()).find(|&i| rows[i][col] == 1) {
            rows.swap(rank, p);
            for i in 0..rows.len() {
                if i != rank && rows[i][col] == 1 {
                    let pivot = rows[rank].clone();
                    rows[i].iter_mut().zip(&pivot).for_each(|(x, y)| *x ^= y);
                }
            }
            rank += 1;
        }
    }
    (n - rank, n + 1 - rank)
}

fn criterion_7() -> Result<String, String> {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    for n in [2u64, 8, 32, 128] {
        let report = run_shift_demo(n).map_err(|e| e.to_string())?;
        let ids = &report.identities;
        let oracle = shift_dims_by_elimination(n as usize);
        ok &= ids.aua_equals_a && ids.uv_identity && ids.vu_identity && report.passed();
        ok &= (report.kernel_dim, report.cokernel_dim) == (0, 1) && oracle == (0, 1);
        parts.push(format!("N={n}: ker {} coker {}", report.kernel_dim, report.cokernel_dim));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(1);
    let detail = format!("{}; {:.1} ms", parts.join(", "), elapsed.as_secs_f64() * 1e3);
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_8() -> Result<String, String> {
    let z4 = ring("Z4");
    let report =
        build_m2_counterexample(CounterexampleBase::Finite { ring: &z4, s: el(3), t: el(3) }, &Limits::default())
            .map_err(|e| e.to_string())?;
    // plain arithmetic over Z/4
    let mul = |x: [i64; 4], y: [i64; 4]| {
        [x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]]
            .map(|v| v.rem_euclid(4))
    };
    let (a, u, v) = ([3, 0, 0, 0], [3, 1, 1, 0], [0, 1, 1, -3i64.rem_euclid(4)]);
    let plain = mul(mul(a, u), a) == a && mul(u, v) == [1, 0, 0, 1] && mul(v, u) == [1, 0, 0, 1];
    let in_corner = matches!(report.corner_membership, CornerMembership::UnitRegular { .. });
    let detail = format!(
        "aua = a: {}, uv = 1: {}, vu = 1: {}, a in ur(eRe): {in_corner}",
        report.aua_equals_a, report.uv_identity, report.vu_identity
    );
    if plain && report.identities_hold() && in_corner {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_9() -> Result<String, String> {
    let first = urcorner_cli::run(["family", "--json"]);
    let second = urcorner_cli::run(["family", "--json"]);
    let payload = |text: &str| -> Result<String, String> {
        let mut doc: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        doc.as_object_mut().ok_or("not an object")?.remove("timing");
        Ok(serde_json::to_string(&doc).unwrap())
    };
    let same_payload = payload(&first.stdout)? == payload(&second.stdout)?;
    let bare = urcorner_cli::run(["family", "--json", "--no-timing"]).stdout;
    let same_bytes = bare == urcorner_cli::run(["family", "--json", "--no-timing"]).stdout;
    let detail = format!(
        "payloads identical: {same_payload}, --no-timing documents byte-identical: {same_bytes} ({} bytes), exit codes {} {}",
        bare.len(),
        first.exit_code,
        second.exit_code
    );
    if same_payload && same_bytes && first.exit_code == 0 && second.exit_code == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() {
    // `cargo test -- --list` and filters come through here too
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let sweep = catch_unwind(family_verdicts);
    type Check<'a> = Box<dyn Fn() -> Result<String, String> + 'a>;
    let criteria: Vec<(&str, Check)> = vec![
        (
            "theorem equivalence sweep",
            Box::new(|| sweep.as_ref().map_err(|_| "sweep panicked".to_string()).and_then(criterion_1)),
        ),
        (
            "chain implications",
            Box::new(|| sweep.as_ref().map_err(|_| "sweep panicked".to_string()).and_then(criterion_2)),
        ),
        ("witness extraction", Box::new(criterion_3)),
        ("weakened inverse hypotheses", Box::new(criterion_4)),
        ("corollary on unit regular rings", Box::new(criterion_5)),
        ("regularity oracles", Box::new(criterion_6)),
        ("shift demo", Box::new(criterion_7)),
        ("finite counterexample scaffold", Box::new(criterion_8)),
        ("determinism of family --json", Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let (tag, detail) = match result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {}: {tag}  {name}: {detail}", i + 1);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
