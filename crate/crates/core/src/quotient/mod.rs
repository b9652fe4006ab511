//! Tamagawa quotients `c_v(E/Θ) = ∏_H c_v(E/F^H)^{n_H}` and the growth
//! certificate built from them.
//!
//! The primes of `F^H` above `v` are the double cosets `H\G/D`. Over the
//! completion at such a prime, with ramification index `e` and residue
//! degree `f` relative to `K_v`, multiplicative reduction stays
//! multiplicative with `ord = e·m`; split stays split, and non-split becomes
//! split exactly when `f` is even. Good reduction contributes 1.
//!
//! The certificate compares both sides of
//!
//! ```text
//! ∏_H (#Sha(E/F^H) c(E/F^H))^{n_H}  and  ∏_H |H|^{n_H rk E(K)}
//! ```
//!
//! at `p`: `ord_p` of the Sha quotient is the right-hand side minus the
//! sum of `ord_p c_v(E/Θ)` over bad places. Torsion and periods cancel
//! under the standing assumptions, which the certificate lists.

pub mod tables;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::brauer::{self, norm_constant, BrauerError, BrauerRelation};
use crate::curve::{CurveError, CurveProfile, ReductionData, ReductionKind, ShaAssumption, WeierstrassModel};
use crate::field::{FieldError, FieldSpec, LocalClass, LocalClassSpec};
use crate::group::{double_cosets, GroupError, GroupKind, SubgroupLattice};
use crate::FactoredRational;
use tables::{classify, Cell, Column, Row, TableKind};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuotientError {
    #[error("additive reduction at {0}: the curve is not semistable")]
    Additive(u64),
    #[error("curve {0} is not semistable (additive reduction at {1:?})")]
    NotSemistable(String, Vec<u64>),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("no local class for bad prime {prime}: {reason}")]
    MissingLocalClass { prime: u64, reason: String },
    #[error("no tabulated values for {0}")]
    NoTable(GroupKind),
    #[error("{table}: cell {row} × {column} is a dash (impossible combination)")]
    DashCell { table: TableKind, row: Row, column: Column },
    #[error("{table}: column {column} is not tabulated")]
    NotTabulated { table: TableKind, column: Column },
    #[error("{table}: cell {row} × {column} depends on the parity of ord_v(Δ)")]
    ParityRequired { table: TableKind, row: Row, column: Column },
    #[error("certificate does not revalidate: {0}")]
    Validation(String),
    #[error(transparent)]
    Brauer(#[from] BrauerError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// One prime of `F^H` above `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceAbove {
    pub local_degree: usize,
    pub e: usize,
    pub f: usize,
    pub kind: ReductionKind,
    /// `ord_w(Δ) = e·m`.
    pub ord: u64,
    pub tamagawa: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubfieldContribution {
    pub class_id: usize,
    pub name: String,
    pub coefficient: i64,
    pub places: Vec<PlaceAbove>,
    /// `c_v(E/F^H)`: the product over `places`.
    pub tamagawa: FactoredRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceQuotientReport {
    pub prime: u64,
    pub kind: ReductionKind,
    pub m: u32,
    pub local_class: LocalClass,
    pub contributions: Vec<SubfieldContribution>,
    pub quotient: FactoredRational,
    pub table_cell: Option<String>,
}

/// Reduction over a completion with indices `e`, `f` above a place of
/// type `kind` with `ord_v(Δ) = m`.
pub fn extend_reduction(kind: ReductionKind, m: u32, e: usize, f: usize) -> (ReductionKind, u64) {
    let ord = e as u64 * m as u64;
    let kind = match kind {
        ReductionKind::NonsplitMultiplicative if f.is_multiple_of(2) => ReductionKind::SplitMultiplicative,
        k => k,
    };
    (kind, ord)
}

/// `c_v(E/Θ)` by the double-coset oracle.
pub fn local_theta_quotient(
    rel: &BrauerRelation,
    lc: &LocalClass,
    rd: &ReductionData,
) -> Result<PlaceQuotientReport, QuotientError> {
    if rd.kind == ReductionKind::Additive {
        return Err(QuotientError::Additive(rd.prime));
    }
    let lattice = rel.lattice();
    let g = lattice.group();
    let mut contributions = Vec::new();
    let mut quotient = FactoredRational::one();
    for (&id, &n) in rel.coeffs() {
        let class = lattice.class(id);
        let cosets = double_cosets(g, &class.representative, &lc.decomposition, Some(&lc.inertia))?;
        let mut tamagawa = FactoredRational::one();
        let mut places = Vec::with_capacity(cosets.len());
        for dc in cosets {
            let e = dc.e_index.expect("inertia supplied");
            let f = dc.f_index.expect("inertia supplied");
            let (kind, ord) = extend_reduction(rd.kind, rd.m, e, f);
            let c = crate::curve::semistable_tamagawa(kind, ord).expect("semistable");
            tamagawa = tamagawa * FactoredRational::from_u64(c);
            places.push(PlaceAbove { local_degree: dc.local_degree, e, f, kind, ord, tamagawa: c });
        }
        quotient = quotient * tamagawa.pow(n);
        contributions.push(SubfieldContribution {
            class_id: id,
            name: class.name.clone(),
            coefficient: n,
            places,
            tamagawa,
        });
    }
    Ok(PlaceQuotientReport {
        prime: rd.prime,
        kind: rd.kind,
        m: rd.m,
        local_class: lc.clone(),
        contributions,
        quotient,
        table_cell: None,
    })
}

/// Label of the table cell a report falls into, when `kind` has a table.
pub fn table_cell_for(kind: GroupKind, lattice: &SubgroupLattice, report: &PlaceQuotientReport) -> Option<Cell> {
    let table = TableKind::for_group(kind).ok()?;
    let rd = ReductionData { prime: report.prime, kind: report.kind, m: report.m, tamagawa: None };
    classify(table, lattice, &report.local_class, &rd)
}

/// `∏ Reg(E/F^H)^{n_H} = ∏ |H|^{-n_H rk E(K)}`, from `⟨P,Q⟩_M = [M:K]⟨P,Q⟩_K`.
pub fn regulator_quotient(rel: &BrauerRelation, rank: u32) -> FactoredRational {
    norm_constant(rel).pow(-(rank as i64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremCase {
    /// `p = 2`, `G = C2 x C2`.
    #[serde(rename = "a")]
    A,
    /// `p` odd, `G = D_2p`.
    #[serde(rename = "b")]
    B,
    /// `p` odd, `G = Cp x Cp` or `Cp ⋊ Cq` with `q` odd.
    #[serde(rename = "c")]
    C,
}

/// Which case of the theorem `(p, G)` belongs to, if any.
pub fn theorem_case(kind: GroupKind, p: u64) -> Option<TheoremCase> {
    let odd = p > 2 && arith::is_prime(p);
    match kind {
        GroupKind::ElemAbelian(2) if p == 2 => Some(TheoremCase::A),
        GroupKind::Dihedral(n) if odd && n == p => Some(TheoremCase::B),
        GroupKind::Semidirect(n, 2) if odd && n == p => Some(TheoremCase::B),
        GroupKind::ElemAbelian(n) if odd && n == p => Some(TheoremCase::C),
        GroupKind::Semidirect(n, q) if odd && n == p && q > 2 => Some(TheoremCase::C),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConclusionTier {
    None,
    /// Sha changes somewhere in `F/K`, or the rank grows.
    ShaChange,
    /// `Sha(E/F)[p] ≠ 0`, or the rank grows.
    ShaNonzero,
    /// `#S^p(E/F) > #S^p(E/K)`.
    SelmerGrowth,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub semistable: bool,
    pub rank: u32,
    pub n_nonsplit: usize,
    pub n_nonsplit_even_ord: usize,
    /// `rank > #{non-split v with ord_v(Δ) even}`.
    pub case_a: bool,
    /// `rank > #{non-split v}`.
    pub case_b: bool,
    /// `rank > 0`.
    pub case_c: bool,
    pub case: Option<TheoremCase>,
    pub hypotheses_hold: bool,
    pub failing: Option<String>,
    pub sha_p_trivial: bool,
    pub p_divides_torsion: bool,
    pub tier: ConclusionTier,
}

pub fn hypothesis_check(profile: &CurveProfile, p: u64, kind: GroupKind) -> HypothesisReport {
    let counts = profile.hypothesis_counts();
    let rank = profile.rank as usize;
    let semistable = counts.is_semistable;
    let case_a = semistable && rank > counts.n_nonsplit_even_ord;
    let case_b = semistable && rank > counts.n_nonsplit;
    let case_c = semistable && rank > 0;
    let case = theorem_case(kind, p);
    let failing = if !semistable {
        Some("curve is not semistable".to_string())
    } else {
        match case {
            None => Some(format!("(p, G) = ({p}, {kind}) is not covered by the theorem")),
            Some(TheoremCase::A) if !case_a => Some(format!(
                "rank {rank} is not greater than the {} non-split places with even ord_v(Δ)",
                counts.n_nonsplit_even_ord
            )),
            Some(TheoremCase::B) if !case_b => {
                Some(format!("rank {rank} is not greater than the {} non-split places", counts.n_nonsplit))
            }
            Some(TheoremCase::C) if !case_c => Some("rank is zero".to_string()),
            Some(_) => None,
        }
    };
    let hypotheses_hold = failing.is_none();
    let sha_p_trivial = profile.sha.trivial_at(p);
    let p_divides_torsion = profile.torsion_order.is_multiple_of(p);
    let tier = match (hypotheses_hold, sha_p_trivial, p_divides_torsion) {
        (false, _, _) => ConclusionTier::None,
        (true, false, _) => ConclusionTier::ShaChange,
        (true, true, true) => ConclusionTier::ShaNonzero,
        (true, true, false) => ConclusionTier::SelmerGrowth,
    };
    HypothesisReport {
        semistable,
        rank: profile.rank,
        n_nonsplit: counts.n_nonsplit,
        n_nonsplit_even_ord: counts.n_nonsplit_even_ord,
        case_a,
        case_b,
        case_c,
        case,
        hypotheses_hold,
        failing,
        sha_p_trivial,
        p_divides_torsion,
        tier,
    }
}

pub fn conclusion_text(tier: ConclusionTier, p: u64) -> String {
    match tier {
        ConclusionTier::None => "no conclusion: the hypotheses of the theorem are not met".into(),
        ConclusionTier::ShaChange => format!(
            "if Sha(E/K)[{p}^∞] is finite: the Sha quotient across the intermediate fields has nonzero \
             ord_{p}, so #Sha[{p}^∞] changes somewhere in F/K, or E(F) ⊋ E(K)"
        ),
        ConclusionTier::ShaNonzero => format!("Sha(E/F)[{p}] ≠ 0, or E(F) ⊋ E(K)"),
        ConclusionTier::SelmerGrowth => format!("#S^{p}(E/F) > #S^{p}(E/K)"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub label: Option<String>,
    pub model: WeierstrassModel,
    pub minimal_model: WeierstrassModel,
    pub bad_places: Vec<ReductionData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assumptions {
    pub rank: u32,
    pub torsion_order: u64,
    pub sha: ShaAssumption,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationRecord {
    /// Class id to coefficient.
    pub coeffs: BTreeMap<usize, i64>,
    pub named: BTreeMap<String, i64>,
    pub display: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthCertificate {
    pub schema: u32,
    pub curve: CurveSummary,
    pub field: FieldSpec,
    pub group: GroupKind,
    pub p: u64,
    pub relation: RelationRecord,
    pub norm_constant: FactoredRational,
    pub regulator_quotient: FactoredRational,
    pub hypotheses: HypothesisReport,
    pub assumptions: Assumptions,
    pub places: Vec<PlaceQuotientReport>,
    pub ord_p_tamagawa: i64,
    pub ord_p_rhs: i64,
    pub ord_p_sha_quotient: i64,
    pub conditional_sha_prediction: Option<i64>,
    pub conclusion: ConclusionTier,
    pub conclusion_text: String,
}

fn standing_notes(p: u64, prediction: bool) -> Vec<String> {
    let mut notes = vec![
        format!("Sha(E/F)[{p}^∞] is finite"),
        format!("E(K) ⊗ Z_{p} = E(F) ⊗ Z_{p}; torsion terms cancel since Σ n_H = 0"),
        "places of good reduction and infinite places contribute 1".to_string(),
    ];
    if prediction {
        notes.push(format!(
            "conditional prediction assumes Sha[{p}^∞] trivial over every proper intermediate field"
        ));
    }
    notes
}

/// Assemble the certificate for `profile` over `field` at `p`, using the
/// standard relation of the field's group.
///
/// Local classes come from `overrides` first, then from the field data.
/// Overrides at primes of good reduction are kept and contribute 1.
pub fn certify(
    profile: &CurveProfile,
    field: &FieldSpec,
    p: u64,
    overrides: &[LocalClassSpec],
) -> Result<GrowthCertificate, QuotientError> {
    if !arith::is_prime(p) {
        return Err(QuotientError::NotPrime(p));
    }
    if !profile.is_semistable() {
        let additive = profile
            .bad_places
            .iter()
            .filter(|r| r.kind == ReductionKind::Additive)
            .map(|r| r.prime)
            .collect();
        let name = profile.label.clone().unwrap_or_else(|| profile.minimal_model.to_string());
        return Err(QuotientError::NotSemistable(name, additive));
    }
    let kind = field.group;
    let lattice = brauer::lattice_for(kind)?;
    let rel = brauer::canonical_relation_in(Arc::clone(&lattice), kind)?;

    let mut override_map = BTreeMap::new();
    for spec in overrides {
        override_map.insert(spec.prime, spec.resolve(&lattice)?);
    }
    let mut primes: Vec<u64> = profile.bad_places.iter().map(|r| r.prime).collect();
    primes.extend(override_map.keys().copied());
    primes.sort_unstable();
    primes.dedup();

    let mut places = Vec::with_capacity(primes.len());
    for v in primes {
        let rd = profile.reduction_type(v)?;
        let lc = match override_map.get(&v) {
            Some(lc) => lc.clone(),
            None => field
                .local_class(&lattice, v)
                .map_err(|e| QuotientError::MissingLocalClass { prime: v, reason: e.to_string() })?,
        };
        let mut report = local_theta_quotient(&rel, &lc, &rd)?;
        report.table_cell = table_cell_for(kind, &lattice, &report).map(|c| c.to_string());
        places.push(report);
    }

    let norm = norm_constant(&rel);
    let ord_p_tamagawa: i64 = places.iter().map(|r| r.quotient.ord(p)).sum();
    let ord_p_rhs = profile.rank as i64 * norm.ord(p);
    let ord_p_sha_quotient = ord_p_rhs - ord_p_tamagawa;
    let hypotheses = hypothesis_check(profile, p, kind);
    let n_trivial = rel.coeff(lattice.trivial_class());
    let conditional_sha_prediction = (profile.sha.trivial_at(p) && n_trivial != 0 && ord_p_sha_quotient % n_trivial == 0)
        .then(|| ord_p_sha_quotient / n_trivial);
    if hypotheses.hypotheses_hold && ord_p_sha_quotient <= 0 {
        return Err(QuotientError::Validation(format!(
            "hypotheses hold but ord_{p} of the Sha quotient is {ord_p_sha_quotient}"
        )));
    }
    let conclusion = hypotheses.tier;
    Ok(GrowthCertificate {
        schema: SCHEMA_VERSION,
        curve: CurveSummary {
            label: profile.label.clone(),
            model: profile.model.clone(),
            minimal_model: profile.minimal_model.clone(),
            bad_places: profile.bad_places.clone(),
        },
        field: field.clone(),
        group: kind,
        p,
        relation: RelationRecord {
            coeffs: rel.coeffs().clone(),
            named: rel.named_coeffs(),
            display: rel.to_string(),
        },
        regulator_quotient: regulator_quotient(&rel, profile.rank),
        norm_constant: norm,
        hypotheses,
        assumptions: Assumptions {
            rank: profile.rank,
            torsion_order: profile.torsion_order,
            sha: profile.sha.clone(),
            notes: standing_notes(p, conditional_sha_prediction.is_some()),
        },
        places,
        ord_p_tamagawa,
        ord_p_rhs,
        ord_p_sha_quotient,
        conditional_sha_prediction,
        conclusion,
        conclusion_text: conclusion_text(conclusion, p),
    })
}

impl GrowthCertificate {
    /// Recompute everything derivable from the recorded inputs and compare.
    pub fn revalidate(&self) -> Result<(), QuotientError> {
        let fail = |what: &str| Err(QuotientError::Validation(what.to_string()));
        if self.schema != SCHEMA_VERSION {
            return fail("unknown schema version");
        }
        if self.field.group != self.group {
            return fail("field group differs from certificate group");
        }
        let profile = CurveProfile::new(
            self.curve.label.clone(),
            self.curve.model.clone(),
            self.assumptions.rank,
            self.assumptions.torsion_order,
            self.assumptions.sha.clone(),
        )?;
        if profile.minimal_model != self.curve.minimal_model || profile.bad_places != self.curve.bad_places {
            return fail("curve data does not match its model");
        }
        let lattice = brauer::lattice_for(self.group)?;
        let rel = brauer::canonical_relation_in(Arc::clone(&lattice), self.group)?;
        if rel.coeffs() != &self.relation.coeffs {
            return fail("relation is not the standard one for the group");
        }
        if norm_constant(&rel) != self.norm_constant || regulator_quotient(&rel, self.assumptions.rank) != self.regulator_quotient {
            return fail("norm constant or regulator quotient differs");
        }
        if !self.norm_constant.is_well_formed() {
            return fail("norm constant has non-prime keys");
        }
        for place in &self.places {
            let lc = LocalClass::new(&lattice, place.local_class.decomposition.clone(), place.local_class.inertia.clone())?;
            if lc != place.local_class {
                return fail("local class record is inconsistent");
            }
            let rd = profile.reduction_type(place.prime)?;
            if rd.kind != place.kind || rd.m != place.m {
                return fail("place reduction data differs from the curve");
            }
            let mut again = local_theta_quotient(&rel, &lc, &rd)?;
            again.table_cell = table_cell_for(self.group, &lattice, &again).map(|c| c.to_string());
            if &again != place {
                return Err(QuotientError::Validation(format!("place {} does not recompute", place.prime)));
            }
        }
        let bad: Vec<u64> = profile.bad_places.iter().map(|r| r.prime).collect();
        if !bad.iter().all(|v| self.places.iter().any(|r| r.prime == *v)) {
            return fail("a bad place is missing");
        }
        let ord_t: i64 = self.places.iter().map(|r| r.quotient.ord(self.p)).sum();
        let rhs = self.assumptions.rank as i64 * self.norm_constant.ord(self.p);
        if ord_t != self.ord_p_tamagawa || rhs != self.ord_p_rhs || rhs - ord_t != self.ord_p_sha_quotient {
            return fail("valuations do not add up");
        }
        if hypothesis_check(&profile, self.p, self.group) != self.hypotheses || self.conclusion != self.hypotheses.tier {
            return fail("hypothesis report differs");
        }
        Ok(())
    }
}

/// Both sides of the `p`-part identity, from asserted Sha orders over each
/// `F^H` (keyed by class id) and the per-place reports.
pub fn eq3_sides(
    rel: &BrauerRelation,
    sha_orders: &BTreeMap<usize, FactoredRational>,
    places: &[PlaceQuotientReport],
    rank: u32,
    p: u64,
) -> (i64, i64) {
    let sha: i64 = rel
        .coeffs()
        .iter()
        .map(|(id, &n)| n * sha_orders.get(id).map_or(0, |s| s.ord(p)))
        .sum();
    let tam: i64 = places.iter().map(|r| r.quotient.ord(p)).sum();
    (sha + tam, rank as i64 * norm_constant(rel).ord(p))
}
