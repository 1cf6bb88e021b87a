use std::fmt::Write;

use serde::Serialize;

use urcorner::{Condition, CornerMembership, Element, ScaffoldReport, ShiftDemoReport};

use crate::report::{CornerBlock, Payload, ReportDocument};

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new<I: IntoIterator<Item = S>, S: Into<String>>(header: I) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn render(&self, out: &mut String, indent: &str) {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        for row in std::iter::once(&self.header).chain(&self.rows) {
            let line: Vec<String> = row.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
            let _ = writeln!(out, "{indent}{}", line.join("  ").trim_end());
        }
    }
}

fn yn(b: bool) -> String {
    if b { "yes" } else { "no" }.into()
}

/// The serde name of a unit enum variant.
fn tag<T: Serialize>(x: &T) -> String {
    serde_json::to_value(x).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn opt(e: Option<Element>) -> String {
    e.map_or_else(|| "-".into(), |e| e.to_string())
}

fn list(xs: &[Element]) -> String {
    format!("{{{}}}", xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn condition_header(lead: &[&str]) -> Vec<String> {
    lead.iter().map(|s| s.to_string()).chain(Condition::ALL.iter().map(|c| c.label().to_string())).collect()
}

fn corner_summary(out: &mut String, block: &CornerBlock) {
    let _ = writeln!(
        out,
        "corner e = {}, f = {}, |eRe| = {}: {} mismatches, {} chain violations{}",
        block.e,
        block.f,
        block.corner_size,
        block.mismatches,
        block.chain_violations,
        if block.sound { "" } else { "  UNSOUND" }
    );
}

fn shift_lines(out: &mut String, demo: &ShiftDemoReport) {
    let ids = &demo.identities;
    let mut t = Table::new(["check", "result"]);
    t.row(vec!["t s = 1".into(), yn(demo.ts_identity)]);
    t.row(vec!["s t = 1".into(), yn(demo.st_identity)]);
    t.row(vec!["s t s = s".into(), yn(demo.s_regular)]);
    t.row(vec!["a u a = a".into(), yn(ids.aua_equals_a)]);
    t.row(vec!["u v = 1".into(), yn(ids.uv_identity)]);
    t.row(vec!["v u = 1".into(), yn(ids.vu_identity)]);
    t.row(vec![format!("dim ker s (N = {})", demo.truncation), demo.kernel_dim.to_string()]);
    t.row(vec![format!("dim coker s (N = {})", demo.truncation), demo.cokernel_dim.to_string()]);
    t.row(vec!["evaluation consistent".into(), yn(demo.evaluation_consistent)]);
    t.render(out, "  ");
    let _ = writeln!(out, "  {}", demo.conclusion);
}

fn scaffold_lines(out: &mut String, s: &ScaffoldReport) {
    let _ = writeln!(out, "scaffold over {}: s = {}, t = {}", s.base, s.s, s.t);
    let mut t = Table::new(["", "value"]);
    t.row(vec!["a".into(), s.a.clone()]);
    t.row(vec!["u".into(), s.u.clone()]);
    t.row(vec!["v".into(), s.v.clone()]);
    t.row(vec!["a u a = a".into(), yn(s.aua_equals_a)]);
    t.row(vec!["u v = 1".into(), yn(s.uv_identity)]);
    t.row(vec!["v u = 1".into(), yn(s.vu_identity)]);
    let membership = match &s.corner_membership {
        CornerMembership::UnitRegular { corner_unit, corner_unit_inverse } => {
            format!("a in ur(eRe), unit {corner_unit} with inverse {corner_unit_inverse}")
        }
        CornerMembership::NotUnitRegular => "a not in ur(eRe)".into(),
        CornerMembership::Undecided { evidence } => format!("undecided: {evidence}"),
    };
    t.row(vec!["corner".into(), membership]);
    t.render(out, "  ");
}

pub fn render(doc: &ReportDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "urcorner {}", doc.command.join(" "));
    if let Some(ring) = &doc.ring {
        let _ = writeln!(out, "ring: {ring}");
    }
    match &doc.payload {
        Payload::Classify(p) => {
            let _ = writeln!(out, "size: {}", p.size);
            let _ =
                writeln!(out, "units ({}): {}", p.units.len(), list(&p.units.iter().map(|r| r.u).collect::<Vec<_>>()));
            let _ = writeln!(out, "idempotents ({}): {}", p.idempotents.len(), list(&p.idempotents));
            let _ = writeln!(out, "regular ({}): {}", p.regular.len(), list(&p.regular));
            let _ = writeln!(out, "ur ({}): {}", p.unit_regular.len(), list(&p.unit_regular));
            let _ = writeln!(out, "unit regular ring: {}", yn(p.unit_regular_ring));
            let mut t = Table::new(["a", "class", "t", "u", "partner"]);
            for r in &p.elements {
                t.row(vec![r.a.to_string(), tag(&r.kind), opt(r.t), opt(r.u), opt(r.partner)]);
            }
            t.render(&mut out, "");
        }
        Payload::VerifyTheorem(p) => {
            match &p.axioms {
                Some(ax) if ax.passed() => {
                    let _ = writeln!(out, "ring axioms: pass");
                }
                Some(ax) => {
                    let failed: Vec<&str> = ax.failures().map(|c| c.axiom.name()).collect();
                    let _ = writeln!(out, "ring axioms: FAIL ({})", failed.join(", "));
                }
                None => {
                    let _ = writeln!(out, "ring axioms: skipped (above axiom cap)");
                }
            }
            for block in &p.corners {
                corner_summary(&mut out, block);
                let mut t = Table::new(condition_header(&["a"]));
                for v in block.verdicts.iter().flatten() {
                    let mut row = vec![v.a.to_string()];
                    row.extend(Condition::ALL.iter().map(|&c| yn(v.holds(c))));
                    t.row(row);
                }
                t.render(&mut out, "  ");
                if let Some(repro) = &block.repro {
                    let _ = writeln!(
                        out,
                        "  repro: ring {} e = {} a = {} violations [{}]",
                        repro.ring,
                        repro.e,
                        repro.a,
                        repro.chain_violations.join(", ")
                    );
                }
            }
            if let Some(sc) = &p.star_corollary {
                let _ = writeln!(out, "unit regular ring: {}", yn(sc.unit_regular_ring));
                let mut t = Table::new(["e", "|eRe|", "|ur(eRe)|", "lift failures", "corner unit regular"]);
                for c in &sc.corners {
                    t.row(vec![
                        c.e.to_string(),
                        c.corner_size.to_string(),
                        c.corner_unit_regular_count.to_string(),
                        c.star_failures.len().to_string(),
                        c.corner_unit_regular.map_or_else(|| "-".into(), yn),
                    ]);
                }
                t.render(&mut out, "  ");
            }
        }
        Payload::Witness(p) => {
            let _ = writeln!(out, "e = {}, f = {}, a = {}, b = {}, u = {}, v = {}", p.e, p.f, p.a, p.b, p.u, opt(p.v));
            if !p.preconditions.is_empty() {
                let names: Vec<String> = p.preconditions.iter().map(tag).collect();
                let _ = writeln!(out, "preconditions violated: {}", names.join(", "));
            }
            if let Some(w) = &p.witness {
                let _ = writeln!(out, "u' = {}, v' = {} (v = {})", w.u_prime, w.v_prime, w.v);
                let mut t = Table::new(["identity", "holds"]);
                let c = &w.checks;
                let i = &w.identities;
                for (name, ok) in [
                    ("a u' a = a", c.a_u_a),
                    ("u' v' = e", c.u_v),
                    ("v' u' = e", c.v_u),
                    ("u', v' in eRe", c.in_corner),
                    ("a = a u a", i.a_eq_aua),
                    ("b = b u b", i.b_eq_bub),
                    ("b u a = 0", i.bua_zero),
                    ("a u b = 0", i.aub_zero),
                    ("(1 - b u) f b = 0", i.annihilates_b),
                    ("(1 - b u) f = 0", i.right_factor_zero),
                    ("e (1 - u b) = 1 - u b", i.left_factor_fixed),
                    ("b e = 0", i.be_zero),
                ] {
                    t.row(vec![name.into(), yn(ok)]);
                }
                t.render(&mut out, "  ");
            }
        }
        Payload::ShiftDemo(p) => {
            let _ = writeln!(out, "shift operators over F2");
            shift_lines(&mut out, &p.demo);
            scaffold_lines(&mut out, &p.scaffold);
        }
        Payload::Family(p) => {
            let mut t = Table::new(condition_header(&["ring", "e", "|eRe|"]).into_iter().chain([
                "mismatch".into(),
                "chain".into(),
                "sound".into(),
            ]));
            for r in &p.rings {
                for b in &r.corners {
                    let mut row = vec![r.ring.clone(), b.e.to_string(), b.corner_size.to_string()];
                    row.extend(Condition::ALL.iter().map(|&c| b.count(c).to_string()));
                    row.extend([b.mismatches.to_string(), b.chain_violations.to_string(), yn(b.sound)]);
                    t.row(row);
                }
            }
            t.render(&mut out, "");
            let mut t = Table::new(["ring", "axioms", "unit regular", "corollary"]);
            for r in &p.rings {
                t.row(vec![r.ring.clone(), yn(r.axioms_passed), yn(r.unit_regular_ring), yn(r.star_corollary_passed)]);
            }
            t.render(&mut out, "");
            scaffold_lines(&mut out, &p.scaffold);
            let _ = writeln!(out, "shift operators over F2");
            shift_lines(&mut out, &p.shift);
        }
        Payload::Capped(p) => {
            let _ = writeln!(out, "{}", p.message);
        }
    }
    let _ = writeln!(out, "status: {}", tag(&doc.status));
    if let Some(t) = doc.timing {
        let _ = writeln!(out, "elapsed: {:.1} ms", t.elapsed_ms);
    }
    out
}
