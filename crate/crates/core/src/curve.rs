//! Local reduction data of elliptic curves over `Q`.
//!
//! Only the semistable picture is computed in full: good reduction,
//! split and non-split multiplicative reduction, with Tamagawa numbers
//! `m` (split) and `2 - (m mod 2)` (non-split), where `m = ord_v(Δ_min)`.
//! Additive places are detected and reported but not analysed further.
//!
//! Split versus non-split is decided by whether `-c6` is a square in the
//! `v`-adic units (Legendre symbol for odd `v`, `-c6 ≡ 1 mod 8` at `v = 2`).
//! [`ap_oracle`] re-derives the same answer by counting points on the
//! nodal reduction.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, FactorError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("singular Weierstrass model (discriminant is zero)")]
    Singular,
    #[error("reduction at {0} is not multiplicative")]
    NotMultiplicative(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("point count at {v} gives {count} nonsingular points, expected {v} ± 1")]
    InconsistentCount { v: u64, count: u64 },
    #[error("prime {0} is too large for exhaustive point counting")]
    PrimeTooLarge(u64),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error("internal error building a model from c4, c6: {0}")]
    Kraus(String),
}

mod bigint_serde {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match x.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&x.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(BigInt::from(v)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeierstrassModel {
    #[serde(with = "bigint_serde")]
    pub a1: BigInt,
    #[serde(with = "bigint_serde")]
    pub a2: BigInt,
    #[serde(with = "bigint_serde")]
    pub a3: BigInt,
    #[serde(with = "bigint_serde")]
    pub a4: BigInt,
    #[serde(with = "bigint_serde")]
    pub a6: BigInt,
}

impl WeierstrassModel {
    pub fn new(a: [i64; 5]) -> Self {
        Self::from_bigints(a.map(BigInt::from))
    }

    pub fn from_bigints([a1, a2, a3, a4, a6]: [BigInt; 5]) -> Self {
        Self { a1, a2, a3, a4, a6 }
    }

    pub fn coefficients(&self) -> [&BigInt; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    /// The model with `a_i ↦ u^i a_i` (change of variables `x ↦ x/u²`, `y ↦ y/u³`).
    pub fn scaled(&self, u: i64) -> Self {
        let u = BigInt::from(u);
        Self {
            a1: &self.a1 * &u,
            a2: &self.a2 * u.pow(2),
            a3: &self.a3 * u.pow(3),
            a4: &self.a4 * u.pow(4),
            a6: &self.a6 * u.pow(6),
        }
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{},{}]", self.a1, self.a2, self.a3, self.a4, self.a6)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    #[serde(with = "bigint_serde")]
    pub b2: BigInt,
    #[serde(with = "bigint_serde")]
    pub b4: BigInt,
    #[serde(with = "bigint_serde")]
    pub b6: BigInt,
    #[serde(with = "bigint_serde")]
    pub b8: BigInt,
    #[serde(with = "bigint_serde")]
    pub c4: BigInt,
    #[serde(with = "bigint_serde")]
    pub c6: BigInt,
    #[serde(with = "bigint_serde")]
    pub disc: BigInt,
}

fn raw_invariants(m: &WeierstrassModel) -> Invariants {
    let WeierstrassModel { a1, a2, a3, a4, a6 } = m;
    let b2 = a1 * a1 + 4 * a2;
    let b4 = 2 * a4 + a1 * a3;
    let b6 = a3 * a3 + 4 * a6;
    let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    let c4 = &b2 * &b2 - 24 * &b4;
    let b2_cubed: BigInt = &b2 * &b2 * &b2;
    let c6 = -b2_cubed + 36 * &b2 * &b4 - 216 * &b6;
    let b2b2b8: BigInt = &b2 * &b2 * &b8;
    let disc = -b2b2b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6;
    Invariants { b2, b4, b6, b8, c4, c6, disc }
}

/// Standard Weierstrass invariants; fails on a singular model.
pub fn compute_invariants(model: &WeierstrassModel) -> Result<Invariants, CurveError> {
    let inv = raw_invariants(model);
    if inv.disc.is_zero() {
        return Err(CurveError::Singular);
    }
    Ok(inv)
}

fn val(x: &BigInt, p: u64) -> u32 {
    arith::valuation(x, p).unwrap_or(u32::MAX)
}

// Kraus: integral a_i with these c4, c6 exist iff both local conditions hold.
fn kraus_at_2(c4: &BigInt, c6: &BigInt) -> bool {
    let c6_mod_4 = arith::bigint_mod(c6, 4);
    let c6_mod_32 = arith::bigint_mod(c6, 32);
    c6_mod_4 == 3 || (val(c4, 2) >= 4 && (c6_mod_32 == 0 || c6_mod_32 == 8))
}

fn kraus_at_3(c6: &BigInt) -> bool {
    val(c6, 3) != 2
}

fn exact_div(a: &BigInt, b: &BigInt, what: &str) -> Result<BigInt, CurveError> {
    let (q, r) = a.div_rem(b);
    if !r.is_zero() {
        return Err(CurveError::Kraus(format!("{what} not integral")));
    }
    Ok(q)
}

/// The reduced model (`a1, a3 ∈ {0,1}`, `a2 ∈ {-1,0,1}`) with invariants `c4, c6`.
fn model_from_c4c6(c4: &BigInt, c6: &BigInt) -> Result<WeierstrassModel, CurveError> {
    let mut b2 = (-c6).mod_floor(&BigInt::from(12));
    if b2 > BigInt::from(6) {
        b2 -= 12;
    }
    let b4 = exact_div(&(&b2 * &b2 - c4), &BigInt::from(24), "b4")?;
    let b2_cubed: BigInt = &b2 * &b2 * &b2;
    let b6 = exact_div(&(-b2_cubed + 36 * &b2 * &b4 - c6), &BigInt::from(216), "b6")?;
    let two = BigInt::from(2);
    let a1 = b2.mod_floor(&two);
    let a3 = b6.mod_floor(&two);
    let a2 = exact_div(&(&b2 - &a1), &BigInt::from(4), "a2")?;
    let a4 = exact_div(&(&b4 - &a1 * &a3), &two, "a4")?;
    let a6 = exact_div(&(&b6 - &a3), &BigInt::from(4), "a6")?;
    let model = WeierstrassModel { a1, a2, a3, a4, a6 };
    let check = raw_invariants(&model);
    if &check.c4 != c4 || &check.c6 != c6 {
        return Err(CurveError::Kraus("reconstructed invariants differ".into()));
    }
    Ok(model)
}

/// A global minimal model over `Q`, in reduced form.
///
/// For each prime `p` with `p¹² | Δ` the largest `k` is taken such that
/// `(c4/p^{4k}, c6/p^{6k})` still comes from an integral model (Kraus's
/// conditions at 2 and 3, plain divisibility elsewhere).
pub fn minimal_model(model: &WeierstrassModel) -> Result<WeierstrassModel, CurveError> {
    let inv = compute_invariants(model)?;
    let mut u = BigInt::one();
    for (p, e) in arith::factor(&inv.disc)? {
        let mut k = e / 12;
        while k > 0 {
            let pk = BigInt::from(p);
            let ok4 = inv.c4.is_zero() || val(&inv.c4, p) >= 4 * k;
            let ok6 = inv.c6.is_zero() || val(&inv.c6, p) >= 6 * k;
            if ok4 && ok6 {
                let c4 = &inv.c4 / pk.pow(4 * k);
                let c6 = &inv.c6 / pk.pow(6 * k);
                let local = match p {
                    2 => kraus_at_2(&c4, &c6),
                    3 => kraus_at_3(&c6),
                    _ => true,
                };
                if local {
                    break;
                }
            }
            k -= 1;
        }
        u *= BigInt::from(p).pow(k);
    }
    let c4 = &inv.c4 / u.pow(4);
    let c6 = &inv.c6 / u.pow(6);
    model_from_c4c6(&c4, &c6)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionKind {
    Good,
    #[serde(rename = "split_mult")]
    SplitMultiplicative,
    #[serde(rename = "nonsplit_mult")]
    NonsplitMultiplicative,
    Additive,
}

impl ReductionKind {
    pub fn is_multiplicative(self) -> bool {
        matches!(self, ReductionKind::SplitMultiplicative | ReductionKind::NonsplitMultiplicative)
    }
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionKind::Good => "good",
            ReductionKind::SplitMultiplicative => "split_mult",
            ReductionKind::NonsplitMultiplicative => "nonsplit_mult",
            ReductionKind::Additive => "additive",
        })
    }
}

/// Tamagawa number of semistable reduction with `ord_v(Δ_min) = m`.
pub fn semistable_tamagawa(kind: ReductionKind, m: u64) -> Option<u64> {
    match kind {
        ReductionKind::Good => Some(1),
        ReductionKind::SplitMultiplicative => Some(m),
        ReductionKind::NonsplitMultiplicative => Some(if m.is_multiple_of(2) { 2 } else { 1 }),
        ReductionKind::Additive => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionData {
    pub prime: u64,
    pub kind: ReductionKind,
    /// `ord_v(Δ_min)`.
    pub m: u32,
    /// `None` at additive places, which are not analysed.
    pub tamagawa: Option<u64>,
}

/// Reduction type at `v`, read off the invariants of a minimal model.
pub fn reduction_from_invariants(inv: &Invariants, v: u64) -> Result<ReductionData, CurveError> {
    if !arith::is_prime(v) {
        return Err(CurveError::NotPrime(v));
    }
    let m = val(&inv.disc, v);
    let kind = if m == 0 {
        ReductionKind::Good
    } else if arith::bigint_mod(&inv.c4, v) == 0 {
        ReductionKind::Additive
    } else if minus_c6_is_local_square(&inv.c6, v) {
        ReductionKind::SplitMultiplicative
    } else {
        ReductionKind::NonsplitMultiplicative
    };
    Ok(ReductionData { prime: v, kind, m, tamagawa: semistable_tamagawa(kind, m as u64) })
}

// -c6 is a v-adic unit at a multiplicative place.
fn minus_c6_is_local_square(c6: &BigInt, v: u64) -> bool {
    let minus_c6 = -c6;
    if v == 2 {
        arith::bigint_mod(&minus_c6, 8) == 1
    } else {
        arith::legendre(arith::bigint_mod(&minus_c6, v), v) == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Splitness {
    Split,
    Nonsplit,
}

/// Number of affine points of the reduction of `model` over `F_v`.
pub fn count_affine_points(model: &WeierstrassModel, v: u64) -> u64 {
    let a: Vec<u64> = model.coefficients().iter().map(|x| arith::bigint_mod(x, v)).collect();
    let (a1, a2, a3, a4, a6) = (a[0], a[1], a[2], a[3], a[4]);
    let rhs = |x: u64| ((x * x % v) * x + a2 * (x * x % v) + a4 * x + a6) % v;
    if v == 2 {
        let mut n = 0;
        for x in 0..2 {
            for y in 0..2 {
                if (y * y + a1 * x * y + a3 * y) % 2 == rhs(x) {
                    n += 1;
                }
            }
        }
        return n;
    }
    // y² + b y = r  ⇔  (2y + b)² = b² + 4r
    let mut squares = vec![0u64; v as usize];
    for t in 0..v {
        squares[(t * t % v) as usize] += 1;
    }
    (0..v)
        .map(|x| {
            let b = (a1 * x + a3) % v;
            squares[((b * b + 4 * rhs(x)) % v) as usize]
        })
        .sum()
}

/// Split/non-split classification by counting nonsingular points of the
/// nodal reduction: `v - 1` means split, `v + 1` non-split.
pub fn ap_oracle(model: &WeierstrassModel, v: u64) -> Result<Splitness, CurveError> {
    if !arith::is_prime(v) {
        return Err(CurveError::NotPrime(v));
    }
    if v > 1_000_000 {
        return Err(CurveError::PrimeTooLarge(v));
    }
    let min = minimal_model(model)?;
    let inv = compute_invariants(&min)?;
    if !reduction_from_invariants(&inv, v)?.kind.is_multiplicative() {
        return Err(CurveError::NotMultiplicative(v));
    }
    // the point at infinity is smooth and the node is affine, so the affine
    // count equals the number of nonsingular projective points
    let count = count_affine_points(&min, v);
    match count {
        c if c + 1 == v => Ok(Splitness::Split),
        c if c == v + 1 => Ok(Splitness::Nonsplit),
        _ => Err(CurveError::InconsistentCount { v, count }),
    }
}

/// Which primes `p` have `Sha(E/Q)[p] = 0` by assumption.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "primes", rename_all = "snake_case")]
pub enum ShaAssumption {
    /// Trivial at every prime.
    Trivial,
    /// Trivial at every prime outside the set.
    TrivialOutside(BTreeSet<u64>),
    /// Trivial exactly at the listed primes.
    TrivialAt(BTreeSet<u64>),
}

impl ShaAssumption {
    pub fn none() -> Self {
        ShaAssumption::TrivialAt(BTreeSet::new())
    }

    pub fn trivial_at(&self, p: u64) -> bool {
        match self {
            ShaAssumption::Trivial => true,
            ShaAssumption::TrivialOutside(s) => !s.contains(&p),
            ShaAssumption::TrivialAt(s) => s.contains(&p),
        }
    }

    pub fn is_fully_trivial(&self) -> bool {
        matches!(self, ShaAssumption::Trivial) || matches!(self, ShaAssumption::TrivialOutside(s) if s.is_empty())
    }

    /// From an analytic order of Sha: trivial outside the primes dividing it.
    pub fn from_analytic_order(n: u64) -> Self {
        if n == 1 {
            return ShaAssumption::Trivial;
        }
        let primes = crate::FactoredRational::from_u64(n).factors().keys().copied().collect();
        ShaAssumption::TrivialOutside(primes)
    }
}

/// A minimal model with its bad places and the ingested global data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveProfile {
    pub label: Option<String>,
    pub model: WeierstrassModel,
    pub minimal_model: WeierstrassModel,
    #[serde(with = "bigint_serde")]
    pub c4: BigInt,
    #[serde(with = "bigint_serde")]
    pub c6: BigInt,
    #[serde(with = "bigint_serde")]
    pub disc_min: BigInt,
    pub bad_places: Vec<ReductionData>,
    pub rank: u32,
    pub torsion_order: u64,
    pub sha: ShaAssumption,
}

impl CurveProfile {
    pub fn new(
        label: Option<String>,
        model: WeierstrassModel,
        rank: u32,
        torsion_order: u64,
        sha: ShaAssumption,
    ) -> Result<Self, CurveError> {
        let minimal = minimal_model(&model)?;
        let inv = compute_invariants(&minimal)?;
        let bad_places = arith::factor(&inv.disc)?
            .into_iter()
            .map(|(p, _)| reduction_from_invariants(&inv, p))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            label,
            model,
            minimal_model: minimal,
            c4: inv.c4,
            c6: inv.c6,
            disc_min: inv.disc,
            bad_places,
            rank,
            torsion_order,
            sha,
        })
    }

    /// Reduction data at any prime `v`.
    pub fn reduction_type(&self, v: u64) -> Result<ReductionData, CurveError> {
        if let Some(r) = self.bad_places.iter().find(|r| r.prime == v) {
            return Ok(r.clone());
        }
        if !arith::is_prime(v) {
            return Err(CurveError::NotPrime(v));
        }
        Ok(ReductionData { prime: v, kind: ReductionKind::Good, m: 0, tamagawa: Some(1) })
    }

    pub fn is_semistable(&self) -> bool {
        self.bad_places.iter().all(|r| r.kind != ReductionKind::Additive)
    }

    /// Product of the bad primes; equals the conductor when semistable.
    pub fn conductor_if_semistable(&self) -> Option<BigInt> {
        self.is_semistable()
            .then(|| self.bad_places.iter().map(|r| BigInt::from(r.prime)).product())
    }

    pub fn hypothesis_counts(&self) -> HypothesisCounts {
        hypothesis_counts(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisCounts {
    pub is_semistable: bool,
    pub n_nonsplit: usize,
    pub n_nonsplit_even_ord: usize,
}

pub fn hypothesis_counts(profile: &CurveProfile) -> HypothesisCounts {
    let nonsplit = || profile.bad_places.iter().filter(|r| r.kind == ReductionKind::NonsplitMultiplicative);
    HypothesisCounts {
        is_semistable: profile.is_semistable(),
        n_nonsplit: nonsplit().count(),
        n_nonsplit_even_ord: nonsplit().filter(|r| r.m % 2 == 0).count(),
    }
}

/// Sign of the minimal discriminant (positive means two real components).
pub fn disc_sign(profile: &CurveProfile) -> i32 {
    if profile.disc_min.is_negative() {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(a: [i64; 5]) -> WeierstrassModel {
        WeierstrassModel::new(a)
    }

    #[test]
    fn invariants_of_65a1_and_y2_x3_1() {
        let inv = compute_invariants(&m([1, 0, 0, -1, 0])).unwrap();
        assert_eq!(inv.c4, BigInt::from(49));
        assert_eq!(inv.c6, BigInt::from(-73));
        assert_eq!(inv.disc, BigInt::from(65));
        let inv = compute_invariants(&m([0, 0, 0, 0, 1])).unwrap();
        assert_eq!(inv.c4, BigInt::from(0));
        assert_eq!(inv.disc, BigInt::from(-432));
        assert_eq!(compute_invariants(&m([0, 0, 0, 0, 0])), Err(CurveError::Singular));
    }

    #[test]
    fn minimal_model_undoes_scaling() {
        let e = m([1, 0, 0, -1, 0]);
        assert_eq!(minimal_model(&e).unwrap(), e);
        for u in [2, 3, 6, -5] {
            assert_eq!(minimal_model(&e.scaled(u)).unwrap(), e);
        }
        let e11 = m([0, -1, 1, -10, -20]);
        assert_eq!(minimal_model(&e11.scaled(6)).unwrap(), e11);
    }

    #[test]
    fn short_model_of_11a1_minimises() {
        // c4 = 496, c6 = 20008 for 11a1; the short model y² = x³ - 27c4 x - 54c6 has u = 6
        let short = m([0, 0, 0, -27 * 496, -54 * 20008]);
        assert_eq!(minimal_model(&short).unwrap(), m([0, -1, 1, -10, -20]));
    }

    #[test]
    fn reduction_examples() {
        let p = CurveProfile::new(None, m([1, 0, 0, -1, 0]), 1, 2, ShaAssumption::Trivial).unwrap();
        let r5 = p.reduction_type(5).unwrap();
        assert_eq!((r5.kind, r5.m, r5.tamagawa), (ReductionKind::NonsplitMultiplicative, 1, Some(1)));
        let r13 = p.reduction_type(13).unwrap();
        assert_eq!(r13.kind, ReductionKind::NonsplitMultiplicative);
        assert_eq!(p.reduction_type(7).unwrap().kind, ReductionKind::Good);
        assert_eq!(p.hypothesis_counts(), HypothesisCounts { is_semistable: true, n_nonsplit: 2, n_nonsplit_even_ord: 0 });

        let p11 = CurveProfile::new(None, m([0, -1, 1, -10, -20]), 0, 5, ShaAssumption::Trivial).unwrap();
        let r = p11.reduction_type(11).unwrap();
        assert_eq!((r.kind, r.m, r.tamagawa), (ReductionKind::SplitMultiplicative, 5, Some(5)));

        // 27a1 = [0,0,1,0,-7] has additive reduction at 3
        let p27 = CurveProfile::new(None, m([0, 0, 1, 0, -7]), 0, 3, ShaAssumption::Trivial).unwrap();
        assert!(!p27.is_semistable());
        assert!(!p27.hypothesis_counts().is_semistable);
    }

    #[test]
    fn point_count_oracle_examples() {
        let e = m([1, 0, 0, -1, 0]);
        assert_eq!(ap_oracle(&e, 5), Ok(Splitness::Nonsplit));
        assert_eq!(count_affine_points(&e, 5), 6);
        assert_eq!(ap_oracle(&e, 13), Ok(Splitness::Nonsplit));
        assert_eq!(ap_oracle(&e, 7), Err(CurveError::NotMultiplicative(7)));
        assert_eq!(ap_oracle(&m([0, -1, 1, -10, -20]), 11), Ok(Splitness::Split));
        // 14a1: non-split at 2, split at 7
        let e14 = m([1, 0, 1, 4, -6]);
        assert_eq!(ap_oracle(&e14, 2), Ok(Splitness::Nonsplit));
        assert_eq!(ap_oracle(&e14, 7), Ok(Splitness::Split));
        let p = CurveProfile::new(None, e14, 0, 6, ShaAssumption::Trivial).unwrap();
        assert_eq!(p.reduction_type(2).unwrap().kind, ReductionKind::NonsplitMultiplicative);
        assert_eq!(p.reduction_type(7).unwrap().kind, ReductionKind::SplitMultiplicative);
    }

    #[test]
    fn fast_count_matches_double_loop() {
        let e = m([1, -1, 1, -12, 15]);
        for v in arith::primes_up_to(60) {
            let a: Vec<u64> = e.coefficients().iter().map(|x| arith::bigint_mod(x, v)).collect();
            let mut n = 0;
            for x in 0..v {
                for y in 0..v {
                    let l = (y * y + a[0] * x * y + a[2] * y) % v;
                    let r = (x * x * x + a[1] * x * x + a[3] * x + a[4]) % v;
                    n += (l == r) as u64;
                }
            }
            assert_eq!(count_affine_points(&e, v), n, "v = {v}");
        }
    }

    #[test]
    fn sha_assumptions() {
        assert!(ShaAssumption::Trivial.trivial_at(7));
        let s = ShaAssumption::from_analytic_order(4);
        assert!(!s.trivial_at(2) && s.trivial_at(3));
        let s = ShaAssumption::TrivialAt([2].into());
        assert!(s.trivial_at(2) && !s.trivial_at(3));
    }

    proptest! {
        #[test]
        fn c4_c6_disc_identity(a in proptest::array::uniform5(-10_000i64..10_000)) {
            let inv = raw_invariants(&m(a));
            prop_assert_eq!(BigInt::from(1728) * &inv.disc, inv.c4.pow(3) - inv.c6.pow(2));
            prop_assert_eq!(BigInt::from(4) * &inv.b8, &inv.b2 * &inv.b6 - inv.b4.pow(2));
        }

        #[test]
        fn minimal_model_is_idempotent(a in proptest::array::uniform5(-200i64..200), u in 1i64..5) {
            let e = m(a);
            prop_assume!(!raw_invariants(&e).disc.is_zero());
            let min = minimal_model(&e.scaled(u)).unwrap();
            prop_assert_eq!(&minimal_model(&min).unwrap(), &min);
            prop_assert_eq!(&min, &minimal_model(&e).unwrap());
            let d0 = raw_invariants(&e).disc;
            let d1 = raw_invariants(&min).disc;
            let (q, r) = d0.div_rem(&d1);
            prop_assert!(r.is_zero());
            // quotient is a twelfth power
            let root = q.abs().nth_root(12);
            prop_assert_eq!(root.pow(12), q.abs());
        }
    }
}
