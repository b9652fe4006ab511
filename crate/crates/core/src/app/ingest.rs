//! CSV ingestion of curve records.
//!
//! The header must be exactly `label,a1,a2,a3,a4,a6,rank,torsion,sha_an`.
//! A missing or different header, a non-integer coefficient, and a repeated
//! label abort the whole file. Other bad rows (wrong field count, bad rank,
//! torsion or `sha_an`, singular model) are collected as rejects.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::curve::{self, CurveError, CurveProfile, ShaAssumption, WeierstrassModel};
use crate::FactoredRational;

pub const HEADER: [&str; 9] = ["label", "a1", "a2", "a3", "a4", "a6", "rank", "torsion", "sha_an"];

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("bad CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("missing or wrong header: expected `{}`, found `{found}`", HEADER.join(","))]
    Header { found: String },
    #[error("line {line}: coefficient {field} = `{value}` is not an integer")]
    Coefficient { line: u64, field: &'static str, value: String },
    #[error("line {line}: duplicate label `{label}` (first seen on line {first})")]
    DuplicateLabel { line: u64, label: String, first: u64 },
}

/// Analytic order of Sha as recorded in the data: a positive rational, or unknown.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum ShaAnalytic {
    Known { num: u64, den: u64 },
    Unknown,
}

impl ShaAnalytic {
    /// Sha is assumed trivial at every prime not dividing the recorded value.
    pub fn assumption(&self) -> ShaAssumption {
        match *self {
            ShaAnalytic::Known { num, den: 1 } => ShaAssumption::from_analytic_order(num),
            ShaAnalytic::Known { num, den } => {
                let f = FactoredRational::from_u64(num) * FactoredRational::from_u64(den);
                ShaAssumption::TrivialOutside(f.factors().keys().copied().collect())
            }
            ShaAnalytic::Unknown => ShaAssumption::none(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, ShaAnalytic::Known { num: 1, den: 1 })
    }
}

impl fmt::Display for ShaAnalytic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShaAnalytic::Known { num, den: 1 } => write!(f, "{num}"),
            ShaAnalytic::Known { num, den } => write!(f, "{num}/{den}"),
            ShaAnalytic::Unknown => f.write_str("unknown"),
        }
    }
}

impl FromStr for ShaAnalytic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s.eq_ignore_ascii_case("unknown") {
            return Ok(ShaAnalytic::Unknown);
        }
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let parse = |x: &str| x.trim().parse::<u64>().ok().filter(|&v| v > 0);
        match (parse(n), parse(d)) {
            (Some(num), Some(den)) => {
                let g = num_integer::gcd(num, den);
                Ok(ShaAnalytic::Known { num: num / g, den: den / g })
            }
            _ => Err(format!("sha_an `{s}` is not a positive rational")),
        }
    }
}

impl From<ShaAnalytic> for String {
    fn from(s: ShaAnalytic) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for ShaAnalytic {
    type Error = String;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub label: String,
    pub model: WeierstrassModel,
    pub rank: u32,
    pub torsion_order: u64,
    pub sha_an: ShaAnalytic,
}

impl CurveRecord {
    pub fn profile(&self) -> Result<CurveProfile, CurveError> {
        CurveProfile::new(
            Some(self.label.clone()),
            self.model.clone(),
            self.rank,
            self.torsion_order,
            self.sha_an.assumption(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reject {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub records: Vec<CurveRecord>,
    pub rejects: Vec<Reject>,
}

impl IngestReport {
    pub fn find(&self, label: &str) -> Option<&CurveRecord> {
        self.records.iter().find(|r| r.label == label)
    }
}

pub fn ingest(path: &Path) -> Result<IngestReport, IngestError> {
    let file = std::fs::File::open(path).map_err(|source| IngestError::Io { path: path.display().to_string(), source })?;
    ingest_reader(file)
}

pub fn ingest_reader<R: Read>(reader: R) -> Result<IngestReport, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(reader);
    let mut rows = rdr.records();
    let header = match rows.next() {
        Some(h) => h?,
        // an empty file has no header but also no data; treat as empty
        None => return Ok(IngestReport::default()),
    };
    let found: Vec<&str> = header.iter().map(str::trim).collect();
    if found != HEADER {
        return Err(IngestError::Header { found: found.join(",") });
    }
    let mut report = IngestReport::default();
    let mut seen: BTreeMap<String, u64> = BTreeMap::new();
    for row in rows {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        if row.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        if row.len() != HEADER.len() {
            report.rejects.push(Reject { line, reason: format!("expected {} fields, found {}", HEADER.len(), row.len()) });
            continue;
        }
        let label = row[0].trim().to_string();
        if label.is_empty() {
            report.rejects.push(Reject { line, reason: "empty label".into() });
            continue;
        }
        let mut a: Vec<BigInt> = Vec::with_capacity(5);
        for (k, field) in HEADER[1..6].iter().enumerate() {
            let value = row[k + 1].trim();
            a.push(value.parse().map_err(|_| IngestError::Coefficient { line, field, value: value.to_string() })?);
        }
        if let Some(&first) = seen.get(&label) {
            return Err(IngestError::DuplicateLabel { line, label, first });
        }
        seen.insert(label.clone(), line);
        let rank = match row[6].trim().parse::<u32>() {
            Ok(r) => r,
            Err(_) => {
                report.rejects.push(Reject { line, reason: format!("rank `{}` is not a non-negative integer", &row[6]) });
                continue;
            }
        };
        let torsion_order = match row[7].trim().parse::<u64>() {
            Ok(t) if t > 0 => t,
            _ => {
                report.rejects.push(Reject { line, reason: format!("torsion `{}` is not a positive integer", &row[7]) });
                continue;
            }
        };
        let sha_an = match row[8].parse::<ShaAnalytic>() {
            Ok(s) => s,
            Err(reason) => {
                report.rejects.push(Reject { line, reason });
                continue;
            }
        };
        let model = WeierstrassModel::from_bigints(a.try_into().expect("five coefficients"));
        if let Err(e) = curve::compute_invariants(&model) {
            report.rejects.push(Reject { line, reason: e.to_string() });
            continue;
        }
        report.records.push(CurveRecord { label, model, rank, torsion_order, sha_an });
    }
    Ok(report)
}

/// Split a Cremona-style label `<conductor><class letters><number>`.
fn label_parts(label: &str) -> Option<(u64, &str, u64)> {
    let digits_end = label.find(|c: char| !c.is_ascii_digit())?;
    let rest = &label[digits_end..];
    let letters_end = rest.find(|c: char| !c.is_ascii_alphabetic())?;
    let conductor = label[..digits_end].parse().ok()?;
    let number = rest[letters_end..].parse().ok()?;
    Some((conductor, &rest[..letters_end], number))
}

/// Conductor, then isogeny class (`a < b < … < z < ba`), then curve number.
/// Labels not of that shape sort after, by plain string order.
pub fn label_cmp(a: &str, b: &str) -> Ordering {
    match (label_parts(a), label_parts(b)) {
        (Some((na, ca, ka)), Some((nb, cb, kb))) => {
            na.cmp(&nb).then(ca.len().cmp(&cb.len())).then(ca.cmp(cb)).then(ka.cmp(&kb)).then(a.cmp(b))
        }
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a.cmp(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ingest_str(s: &str) -> Result<IngestReport, IngestError> {
        ingest_reader(s.as_bytes())
    }

    const HEAD: &str = "label,a1,a2,a3,a4,a6,rank,torsion,sha_an\n";

    #[test]
    fn basic_rows() {
        let r = ingest_str(&format!("{HEAD}65a1,1,0,0,-1,0,1,2,1\n11a1,0,-1,1,-10,-20,0,5,\n")).unwrap();
        assert_eq!(r.records.len(), 2);
        assert_eq!(r.records[0].rank, 1);
        assert_eq!(r.records[1].sha_an, ShaAnalytic::Unknown);
        assert!(r.rejects.is_empty());
        assert!(ingest_str("").unwrap().records.is_empty());
        assert!(ingest_str(HEAD).unwrap().records.is_empty());
    }

    #[test]
    fn hard_errors() {
        assert!(matches!(ingest_str("65a1,1,0,0,-1,0,1,2,1\n"), Err(IngestError::Header { .. })));
        assert!(matches!(
            ingest_str(&format!("{HEAD}65a1,1,0,x,-1,0,1,2,1\n")),
            Err(IngestError::Coefficient { line: 2, field: "a3", .. })
        ));
        let dup = ingest_str(&format!("{HEAD}65a1,1,0,0,-1,0,1,2,1\n11a1,0,-1,1,-10,-20,0,5,1\n65a1,1,0,0,-1,0,1,2,1\n"));
        match dup {
            Err(e @ IngestError::DuplicateLabel { line: 4, first: 2, .. }) => assert!(e.to_string().contains("line 4")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_are_reported() {
        let r = ingest_str(&format!(
            "{HEAD}a,1,0,0,-1,0,1,2,1,9\nb,0,0,0,0,0,0,1,1\nc,1,0,0,-1,0,-1,2,1\nd,1,0,0,-1,0,1,0,1\ne,1,0,0,-1,0,1,2,0\nf,1,0,0,-1,0,1,2,9/4\n"
        ))
        .unwrap();
        let lines: Vec<u64> = r.rejects.iter().map(|x| x.line).collect();
        assert_eq!(lines, vec![2, 3, 4, 5, 6]);
        assert_eq!(r.records.len(), 1);
        assert_eq!(r.records[0].sha_an, ShaAnalytic::Known { num: 9, den: 4 });
        assert!(!r.records[0].sha_an.assumption().trivial_at(3));
        assert!(r.records[0].sha_an.assumption().trivial_at(5));
    }

    #[test]
    fn label_order() {
        let mut v = vec!["91b1", "11a1", "91a1", "123a1", "14a10", "14a2", "20ba1", "20z1", "x"];
        v.sort_by(|a, b| label_cmp(a, b));
        assert_eq!(v, vec!["11a1", "14a2", "14a10", "20z1", "20ba1", "91a1", "91b1", "123a1", "x"]);
    }
}
