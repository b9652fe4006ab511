use std::path::Path;
use std::sync::OnceLock;

use proptest::prelude::*;
use sgl_core::app::{ingest, CurveRecord};
use sgl_core::curve::{CurveProfile, ShaAssumption, WeierstrassModel};
use sgl_core::field::{FieldSpec, LocalClassSpec};
use sgl_core::quotient::{certify, GrowthCertificate, QuotientError};

fn positive_rank() -> &'static [CurveRecord] {
    static CELL: OnceLock<Vec<CurveRecord>> = OnceLock::new();
    CELL.get_or_init(|| {
        let db = ingest(Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/data/cremona_n200.csv"))).unwrap();
        db.records.into_iter().filter(|r| r.rank > 0 && r.profile().unwrap().is_semistable()).collect()
    })
}

fn example() -> GrowthCertificate {
    let prof = CurveProfile::new(None, WeierstrassModel::new([1, 0, 0, -1, 0]), 1, 2, ShaAssumption::TrivialAt([2].into())).unwrap();
    certify(&prof, &FieldSpec::parse("mq:3,5", None).unwrap(), 2, &[]).unwrap()
}

#[test]
fn round_trip_and_tamper_detection() {
    let cert = example();
    let json = serde_json::to_string_pretty(&cert).unwrap();
    let back: GrowthCertificate = serde_json::from_str(&json).unwrap();
    assert_eq!(back, cert);
    back.revalidate().unwrap();

    let mut t = cert.clone();
    t.ord_p_sha_quotient += 1;
    assert!(matches!(t.revalidate(), Err(QuotientError::Validation(_))));
    let mut t = cert.clone();
    t.assumptions.rank = 3;
    assert!(t.revalidate().is_err());
    let mut t = cert.clone();
    t.places[0].m += 1;
    assert!(t.revalidate().is_err());
    let mut t = cert;
    t.places.pop();
    assert!(t.revalidate().is_err());
}

#[test]
fn overrides_agree_with_computed_classes() {
    let cert = example();
    let spec: LocalClassSpec = "5:D=G,I=C2a".parse().unwrap();
    let prof = CurveProfile::new(None, WeierstrassModel::new([1, 0, 0, -1, 0]), 1, 2, ShaAssumption::TrivialAt([2].into())).unwrap();
    let again = certify(&prof, &FieldSpec::parse("mq:3,5", None).unwrap(), 2, &[spec]).unwrap();
    assert_eq!(again, cert);
}

fn squarefree(d: i64) -> bool {
    d != 0 && d != 1 && (2..=d.unsigned_abs().isqrt() as i64).all(|k| d % (k * k) != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Every accepted certificate revalidates and its valuations balance.
    #[test]
    fn certificates_revalidate(idx in 0usize..1000, d1 in -30i64..30, d2 in -30i64..30, p in prop::sample::select(vec![2u64, 3, 5])) {
        prop_assume!(squarefree(d1) && squarefree(d2) && d1 != d2);
        let recs = positive_rank();
        let rec = &recs[idx % recs.len()];
        let field = FieldSpec::parse(&format!("mq:{d1},{d2}"), None);
        prop_assume!(field.is_ok());
        let field = field.unwrap();
        let prof = rec.profile().unwrap();
        match certify(&prof, &field, p, &[]) {
            Ok(cert) => {
                cert.revalidate().unwrap();
                prop_assert_eq!(cert.ord_p_sha_quotient, cert.ord_p_rhs - cert.ord_p_tamagawa);
                if p == 2 && cert.hypotheses.hypotheses_hold {
                    prop_assert!(cert.ord_p_sha_quotient > 0);
                }
            }
            Err(e) => prop_assert!(!matches!(e, QuotientError::Validation(_)), "{}", e),
        }
    }
}

#[test]
fn hypotheses_hold_somewhere() {
    let rec = positive_rank().iter().find(|r| r.label == "91b3").unwrap();
    let cert = certify(&rec.profile().unwrap(), &FieldSpec::parse("mq:-3,13", None).unwrap(), 2, &[]).unwrap();
    assert!(cert.hypotheses.hypotheses_hold);
    assert!(cert.ord_p_sha_quotient > 0);
    cert.revalidate().unwrap();
}
