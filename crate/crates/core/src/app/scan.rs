//! Batch hypothesis scan over ingested records.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ingest::{label_cmp, CurveRecord};
use crate::group::GroupKind;
use crate::quotient::{hypothesis_check, ConclusionTier, HypothesisReport};

/// What a curve must satisfy to be listed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ScanTarget {
    /// The rank inequalities of every case at once: semistable and
    /// `rank > #{non-split places}`.
    AllCases,
    /// One `(p, G)` pair; the theorem's hypotheses for its case must hold.
    Case { p: u64, group: GroupKind },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanFilters {
    /// Require `sha_an = 1`.
    pub sha_trivial: bool,
    /// Require `torsion = 1`, so `E(K)[p] = 0` for every `p`.
    pub trivial_torsion: bool,
    /// Keep only the first `n` matches in label order.
    pub limit: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub label: String,
    pub rank: u32,
    pub torsion_order: u64,
    pub sha_an: String,
    pub n_nonsplit: usize,
    pub n_nonsplit_even_ord: usize,
    pub case_a: bool,
    pub case_b: bool,
    pub case_c: bool,
    /// Only for a single-case scan.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tier: Option<ConclusionTier>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skipped {
    pub label: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanOutput {
    pub schema: u32,
    pub target: ScanTarget,
    pub filters: ScanFilters,
    pub scanned: usize,
    pub matched: usize,
    pub entries: Vec<ScanEntry>,
    pub skipped: Vec<Skipped>,
}

enum Outcome {
    Match(ScanEntry),
    NoMatch,
    Skip(Skipped),
}

fn examine(rec: &CurveRecord, target: ScanTarget, filters: ScanFilters) -> Outcome {
    let profile = match rec.profile() {
        Ok(p) => p,
        Err(e) => return Outcome::Skip(Skipped { label: rec.label.clone(), reason: e.to_string() }),
    };
    if !profile.is_semistable() {
        return Outcome::Skip(Skipped { label: rec.label.clone(), reason: "not semistable".into() });
    }
    if (filters.sha_trivial && !rec.sha_an.is_one()) || (filters.trivial_torsion && rec.torsion_order != 1) {
        return Outcome::NoMatch;
    }
    // the case inequalities do not depend on (p, G); any pair gives them
    let report: HypothesisReport = match target {
        ScanTarget::AllCases => hypothesis_check(&profile, 2, GroupKind::ElemAbelian(2)),
        ScanTarget::Case { p, group } => hypothesis_check(&profile, p, group),
    };
    let (ok, tier) = match target {
        ScanTarget::AllCases => (report.case_a && report.case_b && report.case_c, None),
        ScanTarget::Case { .. } => (report.hypotheses_hold, Some(report.tier)),
    };
    if !ok {
        return Outcome::NoMatch;
    }
    Outcome::Match(ScanEntry {
        label: rec.label.clone(),
        rank: rec.rank,
        torsion_order: rec.torsion_order,
        sha_an: rec.sha_an.to_string(),
        n_nonsplit: report.n_nonsplit,
        n_nonsplit_even_ord: report.n_nonsplit_even_ord,
        case_a: report.case_a,
        case_b: report.case_b,
        case_c: report.case_c,
        tier,
    })
}

/// Records are examined in parallel; the output is ordered by label.
pub fn scan(records: &[CurveRecord], target: ScanTarget, filters: ScanFilters) -> ScanOutput {
    let outcomes: Vec<Outcome> = records.par_iter().map(|r| examine(r, target, filters)).collect();
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Match(e) => entries.push(e),
            Outcome::Skip(s) => skipped.push(s),
            Outcome::NoMatch => {}
        }
    }
    entries.sort_by(|a, b| label_cmp(&a.label, &b.label));
    skipped.sort_by(|a, b| label_cmp(&a.label, &b.label));
    let matched = entries.len();
    if let Some(n) = filters.limit {
        entries.truncate(n);
    }
    ScanOutput { schema: 1, target, filters, scanned: records.len(), matched, entries, skipped }
}
