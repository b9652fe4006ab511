//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails or exceeds its time budget.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sgl_core::app::{ingest, scan, CurveInput, ScanFilters, ScanTarget};
use sgl_core::brauer::smith::{smith, IntMatrix};
use sgl_core::brauer::{
    canonical_relation, canonical_relation_in, express_in_basis, induce, inflate, lattice_for, mark_matrix,
    norm_constant, relation_lattice, verify_relation,
};
use sgl_core::curve::{ap_oracle, ReductionKind, ShaAssumption, Splitness, WeierstrassModel};
use sgl_core::field::FieldSpec;
use sgl_core::group::{double_cosets, make_group, GroupKind, SubgroupLattice};
use sgl_core::quotient::tables::{reproduce_table, Column, Parity, Row};
use sgl_core::FactoredRational;

type Check = Result<String, String>;

/// Name, check, time budget in seconds.
type Criterion = (&'static str, fn() -> Check, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/data/cremona_n200.csv"))
}

fn norms() -> Check {
    let pp = |p: u64, e: i64| FactoredRational::prime_power(p, e);
    let mut cases: Vec<(GroupKind, FactoredRational)> = vec![(GroupKind::ElemAbelian(2), pp(2, 1))];
    for p in [3u64, 5, 7, 11, 13] {
        cases.push((GroupKind::Dihedral(p), pp(p, 1)));
        cases.push((GroupKind::ElemAbelian(p), pp(p, p as i64 - 1)));
    }
    for (p, q) in [(7u64, 3u64), (13, 3), (31, 5)] {
        cases.push((GroupKind::Semidirect(p, q), pp(p, q as i64 - 1)));
    }
    for (kind, want) in &cases {
        let rel = canonical_relation(*kind).map_err(|e| format!("{kind}: {e}"))?;
        ensure(verify_relation(&rel), || format!("{kind}: not a relation"))?;
        let got = norm_constant(&rel);
        ensure(&got == want, || format!("{kind}: norm {got}, expected {want}"))?;
    }
    Ok(format!("{} groups", cases.len()))
}

/// Transcribed tables: `ord_p` per (row, column, parity); `None` is a dash.
fn expected_cell(kind: GroupKind, row: Row, col: Column, parity: Option<Parity>) -> Option<i64> {
    use Column::*;
    use Row::*;
    match kind {
        GroupKind::Dihedral(_) => match (row, col) {
            (Splits, _) => Some(0),
            (InertThenRamified, SplitMult) => Some(-1),
            (InertThenRamified, NonsplitOverF) => None,
            (InertThenRamified, NonsplitThenSplit) => Some(1),
            (TotallyRamified, SplitMult) => Some(-1),
            (TotallyRamified, NonsplitOverF) => Some(0),
            (TotallyRamified, NonsplitThenSplit) => None,
        },
        GroupKind::ElemAbelian(2) => match (row, col, parity) {
            (Splits, _, _) => Some(0),
            (InertThenRamified, SplitMult, _) => Some(-1),
            (InertThenRamified, NonsplitOverF, _) => None,
            (InertThenRamified, NonsplitThenSplit, Some(Parity::Even)) => Some(1),
            (InertThenRamified, NonsplitThenSplit, _) => Some(-1),
            (TotallyRamified, SplitMult, _) => Some(-1),
            (TotallyRamified, NonsplitOverF, Some(Parity::Even)) => Some(0),
            (TotallyRamified, NonsplitOverF, _) => Some(-2),
            (TotallyRamified, NonsplitThenSplit, _) => None,
        },
        GroupKind::ElemAbelian(p) => match row {
            Splits => Some(0),
            _ => Some(1 - p as i64),
        },
        GroupKind::Semidirect(_, q) => match row {
            Splits => Some(0),
            _ => Some(1 - q as i64),
        },
        GroupKind::Cyclic(_) => None,
    }
}

fn tables() -> Check {
    let kinds = [
        GroupKind::Dihedral(3),
        GroupKind::Dihedral(5),
        GroupKind::Dihedral(7),
        GroupKind::ElemAbelian(2),
        GroupKind::ElemAbelian(3),
        GroupKind::ElemAbelian(5),
        GroupKind::ElemAbelian(7),
        GroupKind::Semidirect(7, 3),
    ];
    let mut cells = 0;
    for kind in kinds {
        let rep = reproduce_table(kind).map_err(|e| format!("{kind}: {e}"))?;
        ensure(rep.all_pass, || format!("{kind}: oracle disagrees with table"))?;
        ensure(rep.untabulated_nonzero == 0, || format!("{kind}: {} off-table evaluations with nonzero ord_p", rep.untabulated_nonzero))?;
        let odd = rep.group.order() % 2 == 1;
        ensure(odd || rep.untabulated == 0, || format!("{kind}: {} untabulated evaluations", rep.untabulated))?;
        let want_cells = if matches!(kind, GroupKind::Dihedral(_) | GroupKind::ElemAbelian(2)) { 9 } else { 3 };
        let distinct: std::collections::BTreeSet<_> = rep.cells.iter().map(|c| (c.row, c.column)).collect();
        ensure(distinct.len() == want_cells, || format!("{kind}: {} cells, expected {want_cells}", distinct.len()))?;
        for c in &rep.cells {
            let want = expected_cell(kind, c.row, c.column, c.parity);
            ensure(c.expected == want, || format!("{kind}: cell {:?}/{:?} tabulated {:?}, transcribed {want:?}", c.row, c.column, c.expected))?;
            match want {
                None => ensure(c.realizations == 0, || format!("{kind}: dash cell {:?}/{:?} reached", c.row, c.column))?,
                Some(w) => ensure(c.realizations > 0 && c.observed == [w], || {
                    format!("{kind}: cell {:?}/{:?} observed {:?}, expected {w}", c.row, c.column, c.observed)
                })?,
            }
            cells += 1;
        }
    }
    Ok(format!("{cells} cells over {} groups", kinds.len()))
}

fn lattices() -> Check {
    let v4 = lattice_for(GroupKind::ElemAbelian(2)).map_err(|e| e.to_string())?;
    let basis = relation_lattice(&v4).map_err(|e| e.to_string())?;
    let theta = canonical_relation_in(v4.clone(), GroupKind::ElemAbelian(2)).map_err(|e| e.to_string())?;
    ensure(basis.len() == 1, || format!("C2xC2 rank {}", basis.len()))?;
    ensure(basis[0] == theta || basis[0] == theta.negated(), || format!("C2xC2 basis {}", basis[0]))?;
    for n in 1..=30u64 {
        let l = lattice_for(GroupKind::Cyclic(n)).map_err(|e| e.to_string())?;
        let r = relation_lattice(&l).map_err(|e| e.to_string())?.len();
        ensure(r == 0, || format!("C{n}: rank {r}"))?;
    }
    for kind in [GroupKind::Dihedral(3), GroupKind::Dihedral(5), GroupKind::ElemAbelian(3), GroupKind::Semidirect(7, 3)] {
        let l = lattice_for(kind).map_err(|e| e.to_string())?;
        let basis = relation_lattice(&l).map_err(|e| e.to_string())?;
        let rel = canonical_relation_in(l, kind).map_err(|e| e.to_string())?;
        let coords = express_in_basis(&basis, &rel).map_err(|e| e.to_string())?;
        ensure(coords.is_some(), || format!("{kind}: canonical relation outside the lattice"))?;
    }
    Ok("C2xC2 rank 1, cyclic n<=30 rank 0, 4 canonical relations in lattice".into())
}

fn example_certificate() -> Check {
    let input = CurveInput {
        rank: Some(1),
        torsion: Some(2),
        sha: Some(ShaAssumption::TrivialAt([2].into())),
        ..CurveInput::from_model(WeierstrassModel::new([1, 0, 0, -1, 0]))
    };
    let field = FieldSpec::parse("mq:3,5", None).map_err(|e| e.to_string())?;
    let cert = sgl_core::app::certify_cmd(&input, &field, 2, &[]).map_err(|e| e.to_string())?;
    ensure(cert.ord_p_sha_quotient == 2, || format!("ord_2 sha quotient {}", cert.ord_p_sha_quotient))?;
    let pred = cert.conditional_sha_prediction.ok_or("no prediction")?;
    let size = 2u64.pow(pred as u32);
    ensure(size == 4, || format!("predicted #Sha(E/F)[2^inf] = {size}"))?;
    let json = serde_json::to_string(&cert).map_err(|e| e.to_string())?;
    let back: sgl_core::quotient::GrowthCertificate = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    back.revalidate().map_err(|e| e.to_string())?;
    ensure(back == cert, || "certificate does not round-trip".into())?;
    Ok("ord_2 quotient 2, #Sha(E/F)[2^inf] = 4".into())
}

fn example_scan() -> Check {
    let db = ingest(fixture()).map_err(|e| e.to_string())?;
    let labels = |f: ScanFilters| -> Vec<String> {
        scan(&db.records, ScanTarget::AllCases, f).entries.into_iter().map(|e| e.label).collect()
    };
    let first = labels(ScanFilters { sha_trivial: true, trivial_torsion: false, limit: Some(8) });
    let want = ["91b1", "91b2", "91b3", "123a1", "123a2", "141a1", "142a1", "155a1"];
    ensure(first == want, || format!("scan gave {first:?}"))?;
    let tf = labels(ScanFilters { sha_trivial: true, trivial_torsion: true, limit: None });
    let tf: Vec<String> = tf.into_iter().filter(|l| first.contains(l)).collect();
    ensure(tf == ["91b3", "123a2", "141a1", "142a1"], || format!("torsion-free sublist {tf:?}"))?;
    Ok(format!("{} records scanned", db.records.len()))
}

fn split_oracle() -> Check {
    let db = ingest(fixture()).map_err(|e| e.to_string())?;
    let (mut checked, mut bad) = (0usize, Vec::new());
    for rec in &db.records {
        let Ok(profile) = rec.profile() else { continue };
        for r in &profile.bad_places {
            if r.prime == 2 || r.prime >= 10_000 || !r.kind.is_multiplicative() {
                continue;
            }
            let counted = ap_oracle(&profile.minimal_model, r.prime).map_err(|e| format!("{}: {e}", rec.label))?;
            checked += 1;
            if (counted == Splitness::Split) != (r.kind == ReductionKind::SplitMultiplicative) {
                bad.push(format!("{}@{}", rec.label, r.prime));
            }
        }
    }
    ensure(checked > 0, || "no multiplicative primes checked".into())?;
    ensure(bad.is_empty(), || format!("{} disagreements: {bad:?}", bad.len()))?;
    Ok(format!("{checked} places, 0 disagreements"))
}

fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

fn invariants() -> Check {
    let kinds = [
        GroupKind::ElemAbelian(2),
        GroupKind::Dihedral(3),
        GroupKind::Dihedral(5),
        GroupKind::ElemAbelian(3),
        GroupKind::Semidirect(7, 3),
    ];
    // basis elements: coefficient sum and degree vanish
    let mut lattices: BTreeMap<String, Arc<SubgroupLattice>> = BTreeMap::new();
    for kind in kinds.iter().copied().chain([GroupKind::Dihedral(4), GroupKind::Dihedral(6), GroupKind::Cyclic(12)]) {
        let l = lattice_for(kind).map_err(|e| e.to_string())?;
        for b in relation_lattice(&l).map_err(|e| e.to_string())? {
            ensure(b.coefficient_sum() == 0 && b.degree() == 0 && verify_relation(&b), || format!("{kind}: basis element {b}"))?;
        }
        // Smith form re-multiplication
        let m = mark_matrix(&l);
        let s = smith(&m).map_err(|_| format!("{kind}: overflow"))?;
        let lhs = s.left.checked_mul(&m).and_then(|x| x.checked_mul(&s.right)).map_err(|_| "overflow".to_string())?;
        let back = s.left_inv.checked_mul(&s.diag).and_then(|x| x.checked_mul(&s.right_inv)).map_err(|_| "overflow".to_string())?;
        ensure(lhs == s.diag && back == m, || format!("{kind}: Smith identity fails"))?;
        let d = s.invariant_factors();
        ensure(d.windows(2).all(|w| w[1] % w[0] == 0) && d.iter().all(|&x| x > 0), || format!("{kind}: factors {d:?}"))?;
        ensure(diag_only(&s.diag), || format!("{kind}: Smith form not diagonal"))?;
        lattices.insert(kind.to_string(), l);
    }

    // double cosets: local degrees sum to [G:H], e·f = local degree
    for l in lattices.values() {
        let g = l.group();
        for h in l.classes() {
            for d in l.classes() {
                for i in l.all_subgroups() {
                    let d = &d.representative;
                    if !i.is_subset_of(d) || !i.is_normal_in(g, d) || !d.quotient_is_cyclic(g, i) {
                        continue;
                    }
                    let dc = double_cosets(g, &h.representative, d, Some(i)).map_err(|e| e.to_string())?;
                    let sum: usize = dc.iter().map(|c| c.local_degree).sum();
                    ensure(sum * h.order() == g.order(), || format!("degree sum {sum} for H={}", h.name))?;
                    let sizes: usize = dc.iter().map(|c| c.size).sum();
                    ensure(sizes == g.order(), || "double cosets do not partition G".into())?;
                    ensure(dc.iter().all(|c| c.e_index.zip(c.f_index).map(|(e, f)| e * f) == Some(c.local_degree)), || "e·f mismatch".into())?;
                }
            }
        }
    }

    // norm constant under induction and inflation along random embeddings
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let cases = 200;
    for case in 0..cases {
        let kind = kinds[rng.gen_range(0..kinds.len())];
        let base = lattice_for(kind).map_err(|e| e.to_string())?;
        let theta = canonical_relation_in(base.clone(), kind).map_err(|e| e.to_string())?;
        let want = norm_constant(&theta);
        let g = base.group();
        let k = rng.gen_range(1..=4u64);
        let extra = make_group(GroupKind::Cyclic(k)).map_err(|e| e.to_string())?;
        // Γ = G × C_k or C_k × G, then relabelled at random
        let left = rng.gen_bool(0.5);
        let big = if left { g.direct_product(&extra) } else { extra.direct_product(g) }.map_err(|e| e.to_string())?;
        let (n, kk, c0) = (g.order(), extra.order(), extra.identity());
        let perm = random_perm(big.order(), &mut rng);
        let gamma = Arc::new(SubgroupLattice::new(big.relabel(&perm).map_err(|e| e.to_string())?));
        let mut inv = vec![0; perm.len()];
        for (x, &y) in perm.iter().enumerate() {
            inv[y] = x;
        }
        let embedding: Vec<usize> = g.elements().map(|x| perm[if left { x + n * c0 } else { c0 + kk * x }]).collect();
        let projection: Vec<usize> = (0..perm.len()).map(|y| if left { inv[y] % n } else { inv[y] / kk }).collect();
        let ind = induce(&theta, gamma.clone(), &embedding).map_err(|e| format!("case {case}: {e}"))?;
        let inf = inflate(&theta, gamma, &projection).map_err(|e| format!("case {case}: {e}"))?;
        for (what, r) in [("induced", &ind), ("inflated", &inf)] {
            ensure(verify_relation(r), || format!("case {case} {kind} x C{k}: {what} is not a relation"))?;
            let got = norm_constant(r);
            let p = kind_prime(kind);
            ensure(got.ord(p) == want.ord(p) && got == want, || {
                format!("case {case} {kind} x C{k}: {what} norm {got}, expected {want}")
            })?;
        }
    }
    Ok(format!("{} groups, {cases} random induce/inflate cases", lattices.len()))
}

fn kind_prime(kind: GroupKind) -> u64 {
    match kind {
        GroupKind::Dihedral(p) | GroupKind::ElemAbelian(p) | GroupKind::Semidirect(p, _) => p,
        GroupKind::Cyclic(n) => n,
    }
}

fn diag_only(m: &IntMatrix) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| i == j || m[(i, j)] == 0))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("norm constants", norms, 1),
        ("table reproduction", tables, 5),
        ("relation lattice agreement", lattices, 10),
        ("example certificate", example_certificate, 1),
        ("example scan", example_scan, 1),
        ("split/non-split cross-oracle", split_oracle, 30),
        ("invariant suite", invariants, 30),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = f();
        let dt = t.elapsed();
        let res = match res {
            Ok(msg) if dt > Duration::from_secs(*budget) => Err(format!("{msg}; took {dt:.2?}, budget {budget} s")),
            r => r,
        };
        match res {
            Ok(msg) => println!("PASS {} {name}: {msg} ({dt:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg} ({dt:.2?})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
