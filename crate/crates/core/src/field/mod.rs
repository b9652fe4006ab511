//! How a rational prime `v` behaves in a Galois extension `F/Q` with
//! group `G`, recorded as a [`LocalClass`]: a decomposition group `D` and
//! an inertia group `I ⊴ D` with `D/I` cyclic.
//!
//! Biquadratic fields `Q(√d1, √d2)` are handled exactly. The element
//! `k ∈ {1, 2, 3}` of the Klein group generates the subgroup fixing
//! `√d1`, `√d2`, `√(d1 d2)` respectively, so `C2a`, `C2b`, `C2c` cut out
//! `Q(√d1)`, `Q(√d2)` and `Q(√d3)` with `d3` the squarefree part of `d1 d2`.
//! `I` is the intersection of the kernels of the characters whose quadratic
//! subfield is unramified at `v`; `D` the same over the split subfields.
//!
//! At `v = 2` the quadratic symbol of `Q(√d)` is read off `d mod 8`:
//!
//! | `d mod 8`   | symbol    |
//! |-------------|-----------|
//! | 1           | split     |
//! | 5           | inert     |
//! | 2, 3, 6, 7  | ramified  |
//!
//! For a field given by a defining polynomial of degree `|G|`, only primes
//! not dividing the discriminant are computed: the factorisation pattern
//! mod `v` is the cycle type of Frobenius in the regular representation.
//! This pathway does not check irreducibility or the Galois group of the
//! polynomial; that is the caller's responsibility. Ramified primes, and
//! any prime whose pattern does not pin down a unique cyclic class, need an
//! explicit local class.

pub mod poly;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::group::{GroupError, GroupKind, Subgroup, SubgroupLattice};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("cannot parse field spec `{0}` (expected mq:<d1>,<d2>, poly:<c_n>,...,<c_0> or abstract)")]
    BadSpec(String),
    #[error("cannot parse local class `{0}` (expected <v>:D=<class>,I=<class>)")]
    BadLocalClassSpec(String),
    #[error("{0} is not a squarefree integer other than 0 and 1")]
    NotSquarefree(i64),
    #[error("d1 = d2 = {0}: not a biquadratic field")]
    EqualGenerators(i64),
    #[error("a biquadratic field has group c2xc2, not {0}")]
    GroupMismatch(GroupKind),
    #[error("defining polynomial must be monic")]
    NotMonic,
    #[error("defining polynomial has degree {degree} but |G| = {order}")]
    DegreeMismatch { degree: usize, order: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} divides the polynomial discriminant; pass --local-class {0}:D=...,I=... explicitly")]
    RamifiedPrime(u64),
    #[error("no local data at {0} for an abstract field; pass --local-class {0}:D=...,I=... explicitly")]
    NeedsLocalClass(u64),
    #[error("factorisation pattern {pattern:?} matches several cyclic subgroup classes; pass --local-class explicitly")]
    AmbiguousPattern { pattern: Vec<usize> },
    #[error("factorisation pattern {pattern:?} is not the cycle type of an element of G acting regularly")]
    InconsistentPattern { pattern: Vec<usize> },
    #[error("no subgroup class named `{0}`")]
    UnknownClass(String),
    #[error("no conjugate of I = {i} is a normal subgroup of D = {d} with cyclic quotient")]
    NotNested { d: String, i: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadSymbol {
    Split,
    Inert,
    Ramified,
}

/// Behaviour of `v` in `Q(√d)`, `d` squarefree and not 0 or 1.
pub fn quadratic_symbol(d: i64, v: u64) -> QuadSymbol {
    if v == 2 {
        return match d.rem_euclid(8) {
            1 => QuadSymbol::Split,
            5 => QuadSymbol::Inert,
            _ => QuadSymbol::Ramified,
        };
    }
    let r = (d as i128).rem_euclid(v as i128) as u64;
    if r == 0 {
        QuadSymbol::Ramified
    } else if arith::legendre(r, v) == 1 {
        QuadSymbol::Split
    } else {
        QuadSymbol::Inert
    }
}

/// Squarefree part of `d1·d2`, i.e. `d1 d2 / gcd(d1, d2)²`.
pub fn third_generator(d1: i64, d2: i64) -> i64 {
    let g = num_integer::gcd(d1, d2);
    (d1 / g) * (d2 / g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FieldKind {
    Multiquadratic { d1: i64, d2: i64 },
    /// Monic, highest degree first.
    Polynomial { coeffs: Vec<i64> },
    Abstract,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub kind: FieldKind,
    pub group: GroupKind,
}

impl FieldSpec {
    pub fn multiquadratic(d1: i64, d2: i64) -> Result<Self, FieldError> {
        for d in [d1, d2] {
            if d == 0 || d == 1 || !arith::is_squarefree(d) {
                return Err(FieldError::NotSquarefree(d));
            }
        }
        if d1 == d2 {
            return Err(FieldError::EqualGenerators(d1));
        }
        // both squarefree, so the product is a square only when d1 = d2
        Ok(Self { kind: FieldKind::Multiquadratic { d1, d2 }, group: GroupKind::ElemAbelian(2) })
    }

    pub fn polynomial(coeffs: Vec<i64>, group: GroupKind) -> Result<Self, FieldError> {
        if coeffs.first() != Some(&1) {
            return Err(FieldError::NotMonic);
        }
        let degree = coeffs.len() - 1;
        if degree as u64 != group.order() {
            return Err(FieldError::DegreeMismatch { degree, order: group.order() });
        }
        Ok(Self { kind: FieldKind::Polynomial { coeffs }, group })
    }

    pub fn abstract_group(group: GroupKind) -> Self {
        Self { kind: FieldKind::Abstract, group }
    }

    /// Parse `mq:d1,d2`, `poly:c_n,...,c_0` or `abstract`. The group is
    /// implied for `mq` (and must agree if given) and required otherwise.
    pub fn parse(s: &str, group: Option<GroupKind>) -> Result<Self, FieldError> {
        let bad = || FieldError::BadSpec(s.to_string());
        let t = s.trim();
        let (tag, rest) = t.split_once(':').unwrap_or((t, ""));
        let ints = || -> Result<Vec<i64>, FieldError> {
            rest.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| bad())).collect()
        };
        match tag.to_ascii_lowercase().as_str() {
            "mq" => {
                let d = ints()?;
                let [d1, d2] = d.as_slice() else { return Err(bad()) };
                let spec = Self::multiquadratic(*d1, *d2)?;
                match group {
                    Some(g) if g != spec.group => Err(FieldError::GroupMismatch(g)),
                    _ => Ok(spec),
                }
            }
            "poly" => Self::polynomial(ints()?, group.ok_or_else(bad)?),
            "abstract" if rest.is_empty() => Ok(Self::abstract_group(group.ok_or_else(bad)?)),
            _ => Err(bad()),
        }
    }

    /// The local class of `v`, computed from the field data.
    /// `lattice` must be the subgroup lattice of `make_group(self.group)`.
    pub fn local_class(&self, lattice: &SubgroupLattice, v: u64) -> Result<LocalClass, FieldError> {
        if !arith::is_prime(v) {
            return Err(FieldError::NotPrime(v));
        }
        match &self.kind {
            FieldKind::Multiquadratic { d1, d2 } => multiquadratic_local_class(lattice, *d1, *d2, v),
            FieldKind::Polynomial { coeffs } => {
                let pattern = factor_degree_pattern(coeffs, v)?;
                frobenius_class(lattice, &pattern)
            }
            FieldKind::Abstract => Err(FieldError::NeedsLocalClass(v)),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FieldKind::Multiquadratic { d1, d2 } => write!(f, "mq:{d1},{d2}"),
            FieldKind::Polynomial { coeffs } => {
                let c: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                write!(f, "poly:{}", c.join(","))
            }
            FieldKind::Abstract => write!(f, "abstract"),
        }
    }
}

/// Decomposition and inertia groups of one prime, as actual nested subgroups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalClass {
    #[serde(rename = "D")]
    pub d_name: String,
    #[serde(rename = "I")]
    pub i_name: String,
    pub d_class: usize,
    pub i_class: usize,
    pub decomposition: Subgroup,
    pub inertia: Subgroup,
}

impl LocalClass {
    pub fn new(lattice: &SubgroupLattice, d: Subgroup, i: Subgroup) -> Result<Self, FieldError> {
        let g = lattice.group();
        let unknown = |s: &Subgroup| FieldError::UnknownClass(format!("{:?}", s.elements()));
        let d_class = lattice.class_of(&d).ok_or_else(|| unknown(&d))?;
        let i_class = lattice.class_of(&i).ok_or_else(|| unknown(&i))?;
        let d_name = lattice.class(d_class).name.clone();
        let i_name = lattice.class(i_class).name.clone();
        if !i.is_subset_of(&d) || !i.is_normal_in(g, &d) || !d.quotient_is_cyclic(g, &i) {
            return Err(FieldError::NotNested { d: d_name, i: i_name });
        }
        Ok(Self { d_name, i_name, d_class, i_class, decomposition: d, inertia: i })
    }

    /// Resolve class names: `D` is the canonical representative of its
    /// class and `I` the first conjugate that nests correctly inside it.
    pub fn from_names(lattice: &SubgroupLattice, d: &str, i: &str) -> Result<Self, FieldError> {
        let d_id = lattice.class_by_name(d).ok_or_else(|| FieldError::UnknownClass(d.to_string()))?;
        let i_id = lattice.class_by_name(i).ok_or_else(|| FieldError::UnknownClass(i.to_string()))?;
        let g = lattice.group();
        let dsub = lattice.class(d_id).representative.clone();
        let isub = lattice
            .members(i_id)
            .iter()
            .find(|s| s.is_subset_of(&dsub) && s.is_normal_in(g, &dsub) && dsub.quotient_is_cyclic(g, s))
            .cloned()
            .ok_or_else(|| FieldError::NotNested {
                d: lattice.class(d_id).name.clone(),
                i: lattice.class(i_id).name.clone(),
            })?;
        Self::new(lattice, dsub, isub)
    }

    /// Ramification index.
    pub fn e(&self) -> usize {
        self.inertia.order()
    }

    /// Residue degree.
    pub fn f(&self) -> usize {
        self.decomposition.order() / self.inertia.order()
    }

    pub fn splits_completely(&self) -> bool {
        self.decomposition.order() == 1
    }
}

/// A `--local-class` argument before it is resolved against a lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalClassSpec {
    pub prime: u64,
    pub d: String,
    pub i: String,
}

impl LocalClassSpec {
    pub fn resolve(&self, lattice: &SubgroupLattice) -> Result<LocalClass, FieldError> {
        LocalClass::from_names(lattice, &self.d, &self.i)
    }
}

impl FromStr for LocalClassSpec {
    type Err = FieldError;

    /// `5:D=G,I=C2a`, `v=5:D=G,I=C2a`; `I` defaults to the trivial group.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FieldError::BadLocalClassSpec(s.to_string());
        let (place, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let place = place.trim();
        let place = place.strip_prefix("v=").unwrap_or(place);
        let prime: u64 = place.parse().map_err(|_| bad())?;
        if !arith::is_prime(prime) {
            return Err(FieldError::NotPrime(prime));
        }
        let (mut d, mut i) = (None, None);
        for part in rest.split(',') {
            let (k, val) = part.split_once('=').ok_or_else(bad)?;
            let slot = match k.trim() {
                "D" | "d" => &mut d,
                "I" | "i" => &mut i,
                _ => return Err(bad()),
            };
            if slot.replace(val.trim().to_string()).is_some() {
                return Err(bad());
            }
        }
        Ok(Self { prime, d: d.ok_or_else(bad)?, i: i.unwrap_or_else(|| "1".to_string()) })
    }
}

/// Local class of `v` in `Q(√d1, √d2)`; `lattice` is that of `c2xc2`.
pub fn multiquadratic_local_class(
    lattice: &SubgroupLattice,
    d1: i64,
    d2: i64,
    v: u64,
) -> Result<LocalClass, FieldError> {
    let g = lattice.group();
    let d3 = third_generator(d1, d2);
    let mut d = g.whole();
    let mut i = g.whole();
    let mut unramified = 0;
    for (k, dk) in [(1usize, d1), (2, d2), (3, d3)] {
        let kernel = Subgroup::new(g, vec![0, k])?;
        match quadratic_symbol(dk, v) {
            QuadSymbol::Split => {
                d = d.intersection(&kernel);
                i = i.intersection(&kernel);
                unramified += 1;
            }
            QuadSymbol::Inert => {
                i = i.intersection(&kernel);
                unramified += 1;
            }
            QuadSymbol::Ramified => {}
        }
    }
    if v != 2 {
        // odd v ramified in F is ramified in exactly two of the three subfields
        assert!(unramified == 1 || unramified == 3, "odd {v} unramified in {unramified} subfields");
    }
    LocalClass::new(lattice, d, i)
}

/// Degrees of the irreducible factors of a monic integer polynomial
/// (highest degree first) modulo `v`; `v` must not divide the discriminant.
pub fn factor_degree_pattern(coeffs: &[i64], v: u64) -> Result<Vec<usize>, FieldError> {
    if !arith::is_prime(v) {
        return Err(FieldError::NotPrime(v));
    }
    if coeffs.first() != Some(&1) {
        return Err(FieldError::NotMonic);
    }
    let f = poly::reduce(coeffs, v);
    if !poly::is_squarefree(&f, v) {
        return Err(FieldError::RamifiedPrime(v));
    }
    Ok(poly::distinct_degree_pattern(&f, v))
}

/// Frobenius class from the factorisation pattern of a degree-`|G|`
/// defining polynomial at an unramified prime: `D` cyclic of order `k`
/// when the pattern is `k` repeated `|G|/k` times, and `I = 1`.
pub fn frobenius_class(lattice: &SubgroupLattice, pattern: &[usize]) -> Result<LocalClass, FieldError> {
    let n = lattice.group().order();
    let k = pattern.first().copied().unwrap_or(0);
    if k == 0 || pattern.iter().any(|&x| x != k) || k * pattern.len() != n {
        return Err(FieldError::InconsistentPattern { pattern: pattern.to_vec() });
    }
    match lattice.cyclic_classes_of_order(k).as_slice() {
        [] => Err(FieldError::InconsistentPattern { pattern: pattern.to_vec() }),
        [id] => LocalClass::new(lattice, lattice.class(*id).representative.clone(), lattice.group().trivial()),
        _ => Err(FieldError::AmbiguousPattern { pattern: pattern.to_vec() }),
    }
}

/// `x⁴ - 2(d1 + d2)x² + (d1 - d2)²`, the minimal polynomial of `√d1 + √d2`.
pub fn biquadratic_polynomial(d1: i64, d2: i64) -> Vec<i64> {
    vec![1, 0, -2 * (d1 + d2), 0, (d1 - d2) * (d1 - d2)]
}
