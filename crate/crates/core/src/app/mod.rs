//! Command layer shared by the `sgl` binary: argument parsing helpers,
//! the five commands, their JSON outputs and plain-text renderings.

pub mod ingest;
pub mod render;
pub mod scan;

use std::path::PathBuf;

use serde::Serialize;

use crate::brauer::{self, BrauerError, RelationView};
use crate::curve::{
    self, ap_oracle, CurveError, CurveProfile, HypothesisCounts, Invariants, ReductionData, ShaAssumption, Splitness,
    WeierstrassModel,
};
use crate::field::{FieldError, FieldSpec, LocalClass, LocalClassSpec};
use crate::group::{GroupError, GroupKind};
use crate::quotient::{self, tables, GrowthCertificate, HypothesisReport, QuotientError};
pub use ingest::{ingest, CurveRecord, IngestError, IngestReport};
pub use scan::{scan, ScanFilters, ScanOutput, ScanTarget};

/// Exit status 1: the command line is wrong. Exit status 2: the input is
/// well-formed but the computation is refused.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Refused(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => 1,
            AppError::Refused(_) => 2,
        }
    }
}

impl From<QuotientError> for AppError {
    fn from(e: QuotientError) -> Self {
        match e {
            QuotientError::Field(_) | QuotientError::Group(_) | QuotientError::NotPrime(_) | QuotientError::NoTable(_) => {
                AppError::Usage(e.to_string())
            }
            _ => AppError::Refused(e.to_string()),
        }
    }
}

impl From<BrauerError> for AppError {
    fn from(e: BrauerError) -> Self {
        match e {
            BrauerError::Group(_) => AppError::Usage(e.to_string()),
            _ => AppError::Refused(e.to_string()),
        }
    }
}

impl From<CurveError> for AppError {
    fn from(e: CurveError) -> Self {
        AppError::Refused(e.to_string())
    }
}

impl From<FieldError> for AppError {
    fn from(e: FieldError) -> Self {
        AppError::Usage(e.to_string())
    }
}

impl From<GroupError> for AppError {
    fn from(e: GroupError) -> Self {
        AppError::Usage(e.to_string())
    }
}

impl From<IngestError> for AppError {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::Io { .. } => AppError::Usage(e.to_string()),
            _ => AppError::Refused(e.to_string()),
        }
    }
}

/// `a1,a2,a3,a4,a6`.
pub fn parse_curve(s: &str) -> Result<WeierstrassModel, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(format!("`{s}`: expected five comma-separated integers a1,a2,a3,a4,a6"));
    }
    let mut a = Vec::with_capacity(5);
    for x in parts {
        a.push(x.parse().map_err(|_| format!("`{x}` is not an integer"))?);
    }
    Ok(WeierstrassModel::from_bigints(a.try_into().expect("five")))
}

/// `all`, or a comma-separated list of primes.
pub fn parse_sha_trivial(s: &str) -> Result<ShaAssumption, String> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(ShaAssumption::Trivial);
    }
    let mut set = std::collections::BTreeSet::new();
    for x in s.split(',') {
        let p: u64 = x.trim().parse().map_err(|_| format!("`{x}` is not a prime"))?;
        if !crate::arith::is_prime(p) {
            return Err(format!("{p} is not prime"));
        }
        set.insert(p);
    }
    Ok(ShaAssumption::TrivialAt(set))
}

pub fn parse_prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.trim().parse().map_err(|_| format!("`{s}` is not a positive integer"))?;
    if crate::arith::is_prime(p) {
        Ok(p)
    } else {
        Err(format!("{p} is not prime"))
    }
}

#[derive(Debug, Clone)]
pub enum CurveSource {
    Model(WeierstrassModel),
    Label { label: String, data: PathBuf },
}

/// A curve plus whatever global data the user supplied on the command line.
#[derive(Debug, Clone)]
pub struct CurveInput {
    pub source: CurveSource,
    pub rank: Option<u32>,
    pub torsion: Option<u64>,
    pub sha: Option<ShaAssumption>,
}

impl CurveInput {
    pub fn from_model(model: WeierstrassModel) -> Self {
        Self { source: CurveSource::Model(model), rank: None, torsion: None, sha: None }
    }

    /// Build the profile. Database values are used for a label lookup and
    /// flags override them. Returns whether rank and torsion are known.
    pub fn resolve(&self) -> Result<(CurveProfile, bool), AppError> {
        let (label, model, rank, torsion, sha) = match &self.source {
            CurveSource::Model(m) => (None, m.clone(), self.rank, self.torsion, self.sha.clone()),
            CurveSource::Label { label, data } => {
                let db = ingest(data)?;
                let rec = db
                    .find(label)
                    .ok_or_else(|| AppError::Usage(format!("label `{label}` not found in {}", data.display())))?;
                (
                    Some(rec.label.clone()),
                    rec.model.clone(),
                    Some(self.rank.unwrap_or(rec.rank)),
                    Some(self.torsion.unwrap_or(rec.torsion_order)),
                    Some(self.sha.clone().unwrap_or_else(|| rec.sha_an.assumption())),
                )
            }
        };
        let known = rank.is_some() && torsion.is_some();
        let profile = CurveProfile::new(
            label,
            model,
            rank.unwrap_or(0),
            torsion.unwrap_or(1),
            sha.unwrap_or_else(ShaAssumption::none),
        )?;
        Ok((profile, known))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitCheck {
    pub prime: u64,
    pub algebraic: curve::ReductionKind,
    pub point_count: Option<Splitness>,
    pub agree: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalClassEntry {
    pub prime: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local_class: Option<LocalClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GlobalData {
    pub rank: u32,
    pub torsion_order: u64,
    pub sha: ShaAssumption,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeOutput {
    pub schema: u32,
    pub label: Option<String>,
    pub model: WeierstrassModel,
    pub minimal_model: WeierstrassModel,
    pub invariants: Invariants,
    pub semistable: bool,
    /// Product of the bad primes, when semistable.
    pub conductor: Option<String>,
    pub bad_places: Vec<ReductionData>,
    pub split_checks: Vec<SplitCheck>,
    pub counts: HypothesisCounts,
    pub assumptions: Option<GlobalData>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub local_classes: Vec<LocalClassEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypotheses: Option<HypothesisReport>,
}

const ORACLE_LIMIT: u64 = 10_000;

pub fn analyze(
    input: &CurveInput,
    field: Option<&FieldSpec>,
    group: Option<GroupKind>,
    p: Option<u64>,
    overrides: &[LocalClassSpec],
) -> Result<AnalyzeOutput, AppError> {
    let (profile, known) = input.resolve()?;
    let invariants = curve::compute_invariants(&profile.minimal_model)?;
    let split_checks = profile
        .bad_places
        .iter()
        .filter(|r| r.kind.is_multiplicative())
        .map(|r| {
            let point_count = (r.prime <= ORACLE_LIMIT).then(|| ap_oracle(&profile.minimal_model, r.prime)).transpose()?;
            let agree = point_count.map(|s| {
                (s == Splitness::Split) == (r.kind == curve::ReductionKind::SplitMultiplicative)
            });
            Ok(SplitCheck { prime: r.prime, algebraic: r.kind, point_count, agree })
        })
        .collect::<Result<Vec<_>, CurveError>>()?;

    let mut local_classes = Vec::new();
    if let Some(field) = field {
        let lattice = brauer::lattice_for(field.group)?;
        for r in &profile.bad_places {
            let res = match overrides.iter().find(|o| o.prime == r.prime) {
                Some(o) => o.resolve(&lattice),
                None => field.local_class(&lattice, r.prime),
            };
            local_classes.push(match res {
                Ok(lc) => LocalClassEntry { prime: r.prime, local_class: Some(lc), error: None },
                Err(e) => LocalClassEntry { prime: r.prime, local_class: None, error: Some(e.to_string()) },
            });
        }
    }
    let group = group.or(field.map(|f| f.group));
    let hypotheses = match (p, group, known) {
        (Some(p), Some(g), true) => Some(quotient::hypothesis_check(&profile, p, g)),
        (Some(_), Some(_), false) => {
            return Err(AppError::Usage("hypotheses need --rank and --torsion (or a --label lookup)".into()))
        }
        _ => None,
    };
    Ok(AnalyzeOutput {
        schema: 1,
        label: profile.label.clone(),
        model: profile.model.clone(),
        minimal_model: profile.minimal_model.clone(),
        conductor: profile.conductor_if_semistable().map(|n| n.to_string()),
        semistable: profile.is_semistable(),
        bad_places: profile.bad_places.clone(),
        counts: profile.hypothesis_counts(),
        assumptions: known.then(|| GlobalData {
            rank: profile.rank,
            torsion_order: profile.torsion_order,
            sha: profile.sha.clone(),
        }),
        invariants,
        split_checks,
        field: field.cloned(),
        local_classes,
        hypotheses,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassInfo {
    pub id: usize,
    pub name: String,
    pub order: usize,
    pub class_size: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CanonicalInfo {
    pub display: String,
    pub relation: RelationView,
    /// Integer coordinates in `basis`.
    pub coordinates: Option<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationsOutput {
    pub schema: u32,
    pub group: GroupKind,
    pub order: usize,
    pub classes: Vec<ClassInfo>,
    pub rank: usize,
    pub basis: Vec<RelationView>,
    pub basis_display: Vec<String>,
    pub canonical: Option<CanonicalInfo>,
}

pub fn relations(kind: GroupKind) -> Result<RelationsOutput, AppError> {
    let lattice = brauer::lattice_for(kind)?;
    let basis = brauer::relation_lattice(&lattice)?;
    let canonical = match brauer::canonical_relation_in(lattice.clone(), kind) {
        Ok(rel) => {
            let coords = brauer::express_in_basis(&basis, &rel)?
                .map(|v| v.into_iter().map(|x| x as i64).collect());
            Some(CanonicalInfo { display: rel.to_string(), relation: RelationView::from(&rel), coordinates: coords })
        }
        Err(BrauerError::NoCanonicalRelation(_)) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(RelationsOutput {
        schema: 1,
        group: kind,
        order: lattice.group().order(),
        classes: lattice
            .classes()
            .iter()
            .map(|c| ClassInfo { id: c.class_id, name: c.name.clone(), order: c.order(), class_size: c.class_size })
            .collect(),
        rank: basis.len(),
        basis_display: basis.iter().map(|b| b.to_string()).collect(),
        basis: basis.iter().map(RelationView::from).collect(),
        canonical,
    })
}

pub fn tables_cmd(kind: GroupKind) -> Result<tables::TableReport, AppError> {
    Ok(tables::reproduce_table(kind)?)
}

pub fn certify_cmd(
    input: &CurveInput,
    field: &FieldSpec,
    p: u64,
    overrides: &[LocalClassSpec],
) -> Result<GrowthCertificate, AppError> {
    let (profile, known) = input.resolve()?;
    if !known {
        return Err(AppError::Usage("certify needs --rank and --torsion (or a --label lookup)".into()));
    }
    let cert = quotient::certify(&profile, field, p, overrides)?;
    cert.revalidate()?;
    Ok(cert)
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanCommandOutput {
    #[serde(flatten)]
    pub scan: ScanOutput,
    pub rejects: Vec<ingest::Reject>,
}

pub fn scan_cmd(data: &std::path::Path, target: ScanTarget, filters: ScanFilters) -> Result<ScanCommandOutput, AppError> {
    let db = ingest(data)?;
    if let ScanTarget::Case { p, group } = target {
        crate::group::make_group(group)?;
        if !crate::arith::is_prime(p) {
            return Err(AppError::Usage(format!("{p} is not prime")));
        }
    }
    Ok(ScanCommandOutput { scan: scan(&db.records, target, filters), rejects: db.rejects })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Pretty,
}

/// Serialize as JSON, or render as text.
pub fn emit<T: Serialize + render::Pretty>(value: &T, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("serializable output"),
        Format::Pretty => value.pretty(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argument_parsers() {
        assert_eq!(parse_curve("1,0,0,-1,0").unwrap(), WeierstrassModel::new([1, 0, 0, -1, 0]));
        assert!(parse_curve("1,0,0,-1").is_err());
        assert!(parse_curve("1,0,0,x,0").is_err());
        assert_eq!(parse_sha_trivial("all").unwrap(), ShaAssumption::Trivial);
        assert_eq!(parse_sha_trivial("2,3").unwrap(), ShaAssumption::TrivialAt([2, 3].into()));
        assert!(parse_sha_trivial("4").is_err());
        assert!(parse_prime("9").is_err());
    }

    #[test]
    fn relations_output() {
        let r = relations(GroupKind::ElemAbelian(2)).unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(serde_json::to_value(&r.basis[0].norm).unwrap(), serde_json::json!({"2": 1}));
        let c = r.canonical.unwrap();
        assert_eq!(c.coordinates.map(|v| v[0].abs()), Some(1));
        let r = relations(GroupKind::Cyclic(6)).unwrap();
        assert_eq!(r.rank, 0);
        assert!(r.canonical.is_none());
    }

    #[test]
    fn analyze_and_certify_from_flags() {
        let mut input = CurveInput::from_model(WeierstrassModel::new([1, 0, 0, -1, 0]));
        let field = FieldSpec::parse("mq:3,5", None).unwrap();
        let a = analyze(&input, Some(&field), None, None, &[]).unwrap();
        assert_eq!(a.conductor.as_deref(), Some("65"));
        assert!(a.split_checks.iter().all(|c| c.agree == Some(true)));
        assert_eq!(a.local_classes.len(), 2);
        assert!(a.assumptions.is_none());
        assert!(matches!(analyze(&input, Some(&field), None, Some(2), &[]), Err(AppError::Usage(_))));
        assert!(matches!(certify_cmd(&input, &field, 2, &[]), Err(AppError::Usage(_))));

        input.rank = Some(1);
        input.torsion = Some(2);
        input.sha = Some(ShaAssumption::TrivialAt([2].into()));
        let cert = certify_cmd(&input, &field, 2, &[]).unwrap();
        assert_eq!(cert.conditional_sha_prediction, Some(2));

        let additive = CurveInput { rank: Some(0), torsion: Some(3), ..CurveInput::from_model(WeierstrassModel::new([0, 0, 1, 0, -7])) };
        let err = certify_cmd(&additive, &field, 2, &[]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
