//! Plain-text renderings for `--format pretty`.

use std::fmt::Write;

use super::{AnalyzeOutput, RelationsOutput, ScanCommandOutput};
use crate::curve::{ReductionData, ShaAssumption};
use crate::quotient::{tables::{Cell, TableReport}, GrowthCertificate, HypothesisReport};

pub trait Pretty {
    fn pretty(&self) -> String;
}

fn sha_text(s: &ShaAssumption) -> String {
    let list = |set: &std::collections::BTreeSet<u64>| set.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
    match s {
        ShaAssumption::Trivial => "trivial".into(),
        ShaAssumption::TrivialOutside(set) if set.is_empty() => "trivial".into(),
        ShaAssumption::TrivialOutside(set) => format!("trivial outside {{{}}}", list(set)),
        ShaAssumption::TrivialAt(set) if set.is_empty() => "no assumption".into(),
        ShaAssumption::TrivialAt(set) => format!("trivial at {{{}}}", list(set)),
    }
}

fn places(out: &mut String, bad: &[ReductionData]) {
    for r in bad {
        let c = r.tamagawa.map_or("-".to_string(), |c| c.to_string());
        let _ = writeln!(out, "  v={:<6} {:<14} m={:<3} c_v={}", r.prime, r.kind.to_string(), r.m, c);
    }
}

fn hypotheses(out: &mut String, h: &HypothesisReport) {
    let yn = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(
        out,
        "hypotheses: semistable={} rank={} nonsplit={} nonsplit_even={}",
        yn(h.semistable),
        h.rank,
        h.n_nonsplit,
        h.n_nonsplit_even_ord
    );
    let _ = writeln!(out, "  case a: {}  case b: {}  case c: {}", yn(h.case_a), yn(h.case_b), yn(h.case_c));
    let case = h.case.map_or("none".to_string(), |c| format!("{c:?}").to_lowercase());
    let _ = writeln!(out, "  applicable case: {case}  hold: {}", yn(h.hypotheses_hold));
    if let Some(f) = &h.failing {
        let _ = writeln!(out, "  failing: {f}");
    }
    let _ = writeln!(out, "  tier: {:?}", h.tier);
}

impl Pretty for AnalyzeOutput {
    fn pretty(&self) -> String {
        let mut out = String::new();
        if let Some(l) = &self.label {
            let _ = writeln!(out, "curve {l}");
        }
        let _ = writeln!(out, "model          {}", self.model);
        let _ = writeln!(out, "minimal model  {}", self.minimal_model);
        let _ = writeln!(out, "c4 = {}  c6 = {}  disc = {}", self.invariants.c4, self.invariants.c6, self.invariants.disc);
        match &self.conductor {
            Some(n) => {
                let _ = writeln!(out, "semistable, conductor {n}");
            }
            None => out.push_str("not semistable\n"),
        }
        out.push_str("bad places:\n");
        places(&mut out, &self.bad_places);
        for c in &self.split_checks {
            let verdict = match c.agree {
                Some(true) => "agrees",
                Some(false) => "DISAGREES",
                None => "not checked",
            };
            let _ = writeln!(out, "  point count at {}: {verdict}", c.prime);
        }
        if let Some(a) = &self.assumptions {
            let _ = writeln!(out, "rank {}  torsion {}  sha {}", a.rank, a.torsion_order, sha_text(&a.sha));
        }
        if let Some(f) = &self.field {
            let _ = writeln!(out, "field {f} ({})", f.group);
            for e in &self.local_classes {
                match (&e.local_class, &e.error) {
                    (Some(lc), _) => {
                        let _ = writeln!(out, "  v={:<6} D={} I={} e={} f={}", e.prime, lc.d_name, lc.i_name, lc.e(), lc.f());
                    }
                    (None, Some(err)) => {
                        let _ = writeln!(out, "  v={:<6} {err}", e.prime);
                    }
                    _ => {}
                }
            }
        }
        if let Some(h) = &self.hypotheses {
            hypotheses(&mut out, h);
        }
        out
    }
}

impl Pretty for RelationsOutput {
    fn pretty(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "G = {} (order {})", self.group, self.order);
        out.push_str("subgroup classes:\n");
        for c in &self.classes {
            let _ = writeln!(out, "  {:>3}  {:<6} order {:<4} conjugates {}", c.id, c.name, c.order, c.class_size);
        }
        let _ = writeln!(out, "relation lattice rank {}", self.rank);
        for (b, v) in self.basis_display.iter().zip(&self.basis) {
            let _ = writeln!(out, "  {b}    C = {}", v.norm);
        }
        if let Some(c) = &self.canonical {
            let _ = writeln!(out, "standard relation: {}    C = {}", c.display, c.relation.norm);
            if let Some(x) = &c.coordinates {
                let _ = writeln!(out, "  coordinates {x:?}");
            }
        }
        out
    }
}

impl Pretty for TableReport {
    fn pretty(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "G = {}  p = {}  relation {}", self.group, self.p, self.relation);
        for c in &self.cells {
            let exp = c.expected.map_or("-".to_string(), |e| e.to_string());
            let cell = Cell { row: c.row, column: c.column, parity: c.parity }.to_string();
            let _ = writeln!(
                out,
                "  {:<52} {:<6} ord_p {:>3}  observed {:?}  ({} cases) {}",
                cell,
                c.display,
                exp,
                c.observed,
                c.realizations,
                if c.pass { "PASS" } else { "FAIL" }
            );
        }
        let _ = writeln!(out, "{}", if self.all_pass { "all cells agree" } else { "table mismatch" });
        out
    }
}

impl Pretty for GrowthCertificate {
    fn pretty(&self) -> String {
        let mut out = String::new();
        let name = self.curve.label.clone().unwrap_or_else(|| self.curve.model.to_string());
        let _ = writeln!(out, "E = {name}, F = {} with G = {}, p = {}", self.field, self.group, self.p);
        let _ = writeln!(out, "relation {}    C = {}", self.relation.display, self.norm_constant);
        let _ = writeln!(out, "regulator quotient {}", self.regulator_quotient);
        for pl in &self.places {
            let cell = pl.table_cell.as_deref().unwrap_or("-");
            let _ = writeln!(
                out,
                "  v={:<6} {:<14} m={:<3} D={} I={}  quotient {}  [{cell}]",
                pl.prime,
                pl.kind.to_string(),
                pl.m,
                pl.local_class.d_name,
                pl.local_class.i_name,
                pl.quotient
            );
        }
        let _ = writeln!(out, "ord_p Tamagawa quotient {}", self.ord_p_tamagawa);
        let _ = writeln!(out, "ord_p right-hand side   {}", self.ord_p_rhs);
        let _ = writeln!(out, "ord_p Sha quotient      {}", self.ord_p_sha_quotient);
        if let Some(x) = self.conditional_sha_prediction {
            let _ = writeln!(out, "conditional #Sha(E/F)[{p}^∞] = {p}^{x}", p = self.p);
        }
        hypotheses(&mut out, &self.hypotheses);
        let _ = writeln!(out, "assumptions: sha {}", sha_text(&self.assumptions.sha));
        for n in &self.assumptions.notes {
            let _ = writeln!(out, "  {n}");
        }
        let _ = writeln!(out, "conclusion: {}", self.conclusion_text);
        out
    }
}

impl Pretty for ScanCommandOutput {
    fn pretty(&self) -> String {
        let mut out = String::new();
        let s = &self.scan;
        let _ = writeln!(out, "scanned {}  matched {}  shown {}", s.scanned, s.matched, s.entries.len());
        for e in &s.entries {
            let tier = e.tier.map_or(String::new(), |t| format!("  {t:?}"));
            let _ = writeln!(
                out,
                "  {:<10} rank {} torsion {:<2} sha {:<4} nonsplit {} (even {}){tier}",
                e.label, e.rank, e.torsion_order, e.sha_an, e.n_nonsplit, e.n_nonsplit_even_ord
            );
        }
        if !s.skipped.is_empty() {
            let _ = writeln!(out, "skipped {}", s.skipped.len());
        }
        for r in &self.rejects {
            let _ = writeln!(out, "reject line {}: {}", r.line, r.reason);
        }
        out
    }
}
