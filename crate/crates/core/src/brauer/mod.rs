//! Brauer relations: integer combinations `Σ n_H H` of subgroup classes
//! whose permutation representations `⊕ C[G/H]^{n_H}` cancel.
//!
//! A relation lives on the conjugacy classes of a [`SubgroupLattice`].
//! Verification is by permutation characters: the combination must vanish
//! on every conjugacy class of elements. The full lattice of relations is
//! the integer kernel of the matrix of fixed-point counts, computed through
//! the Smith normal form in [`smith`].

pub mod smith;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::group::{fixed_points, make_group, GroupError, GroupKind, Subgroup, SubgroupLattice};
use crate::rational::FactoredRational;
use smith::{hermite_rows, integer_kernel, solve_in_hermite_basis, IntMatrix, Overflow};

/// `∏ |H|^{n_H}` in factored form.
pub type NormConstant = FactoredRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BrauerError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Overflow(#[from] Overflow),
    #[error("no subgroup class with id {0}")]
    UnknownClass(usize),
    #[error("no canonical relation for group {0}")]
    NoCanonicalRelation(GroupKind),
    #[error("map is not a group homomorphism")]
    NotAHomomorphism,
    #[error("embedding is not injective")]
    NotInjective,
    #[error("quotient map is not surjective")]
    NotSurjective,
    #[error("canonical relation for {0} failed verification")]
    CanonicalFailed(GroupKind),
}

/// A formal combination of subgroup classes, zero coefficients omitted.
#[derive(Debug, Clone)]
pub struct BrauerRelation {
    lattice: Arc<SubgroupLattice>,
    coeffs: BTreeMap<usize, i64>,
}

impl PartialEq for BrauerRelation {
    fn eq(&self, other: &Self) -> bool {
        self.lattice.group() == other.lattice.group() && self.coeffs == other.coeffs
    }
}

impl BrauerRelation {
    pub fn new(
        lattice: Arc<SubgroupLattice>,
        coeffs: impl IntoIterator<Item = (usize, i64)>,
    ) -> Result<Self, BrauerError> {
        let mut map = BTreeMap::new();
        for (id, n) in coeffs {
            if id >= lattice.classes().len() {
                return Err(BrauerError::UnknownClass(id));
            }
            *map.entry(id).or_insert(0) += n;
        }
        map.retain(|_, n| *n != 0);
        Ok(Self { lattice, coeffs: map })
    }

    pub fn from_vector(lattice: Arc<SubgroupLattice>, v: &[i128]) -> Result<Self, BrauerError> {
        let coeffs = v
            .iter()
            .enumerate()
            .map(|(i, &x)| i64::try_from(x).map(|x| (i, x)).map_err(|_| BrauerError::Overflow(Overflow)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(lattice, coeffs)
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, i64> {
        &self.coeffs
    }

    pub fn coeff(&self, class_id: usize) -> i64 {
        self.coeffs.get(&class_id).copied().unwrap_or(0)
    }

    /// Dense coefficient vector indexed by class id.
    pub fn to_vector(&self) -> Vec<i128> {
        (0..self.lattice.classes().len()).map(|i| self.coeff(i) as i128).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Σ n_H [G:H]`, the dimension of the virtual representation.
    pub fn degree(&self) -> i64 {
        let n = self.lattice.group().order() as i64;
        self.coeffs.iter().map(|(&id, &c)| c * n / self.lattice.class(id).order() as i64).sum()
    }

    /// `Σ n_H`, the multiplicity of the trivial character.
    pub fn coefficient_sum(&self) -> i64 {
        self.coeffs.values().sum()
    }

    pub fn negated(&self) -> Self {
        Self {
            lattice: self.lattice.clone(),
            coeffs: self.coeffs.iter().map(|(&k, &v)| (k, -v)).collect(),
        }
    }

    /// Coefficients keyed by class name, e.g. `{"1": 1, "C2a": -1, ...}`.
    pub fn named_coeffs(&self) -> BTreeMap<String, i64> {
        self.coeffs.iter().map(|(&id, &c)| (self.lattice.class(id).name.clone(), c)).collect()
    }

    /// Virtual permutation character, one value per element conjugacy class.
    pub fn character(&self) -> Vec<i64> {
        let g = self.lattice.group();
        g.conjugacy_classes()
            .iter()
            .map(|cls| {
                self.coeffs
                    .iter()
                    .map(|(&id, &n)| n * fixed_points(g, &self.lattice.class(id).representative, cls[0]) as i64)
                    .sum()
            })
            .collect()
    }
}

impl std::fmt::Display for BrauerRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (&id, &n)) in self.coeffs.iter().enumerate() {
            let name = &self.lattice.class(id).name;
            match (k, n < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if n.abs() != 1 {
                write!(f, "{}", n.abs())?;
            }
            write!(f, "{name}")?;
        }
        Ok(())
    }
}

/// Whether the virtual permutation representation vanishes.
pub fn verify_relation(rel: &BrauerRelation) -> bool {
    rel.character().iter().all(|&x| x == 0)
}

/// `∏ |H|^{n_H}`.
pub fn norm_constant(rel: &BrauerRelation) -> NormConstant {
    rel.coeffs
        .iter()
        .map(|(&id, &n)| FactoredRational::from_u64(rel.lattice.class(id).order() as u64).pow(n))
        .product()
}

/// Build the group of `kind` together with its subgroup lattice.
pub fn lattice_for(kind: GroupKind) -> Result<Arc<SubgroupLattice>, BrauerError> {
    Ok(Arc::new(SubgroupLattice::new(make_group(kind)?)))
}

/// The standard relation for each supported family:
///
/// * `C2 x C2`: `1 - C2a - C2b - C2c + 2G`
/// * `D_2p`: `1 - 2C2 - Cp + 2G`
/// * `Cp x Cp`: `1 - Σ_{|U| = p} U + pG`
/// * `Cp ⋊ Cq`: `1 - qCq - Cp + qG`
pub fn canonical_relation(kind: GroupKind) -> Result<BrauerRelation, BrauerError> {
    canonical_relation_in(lattice_for(kind)?, kind)
}

/// As [`canonical_relation`], on an already-built lattice of `make_group(kind)`.
pub fn canonical_relation_in(
    lattice: Arc<SubgroupLattice>,
    kind: GroupKind,
) -> Result<BrauerRelation, BrauerError> {
    let trivial = lattice.trivial_class();
    let whole = lattice.whole_class();
    let unique_cyclic = |n: u64| -> Result<usize, BrauerError> {
        match lattice.cyclic_classes_of_order(n as usize).as_slice() {
            [id] => Ok(*id),
            _ => Err(BrauerError::NoCanonicalRelation(kind)),
        }
    };
    let coeffs: Vec<(usize, i64)> = match kind {
        GroupKind::ElemAbelian(p) => {
            let mut c = vec![(trivial, 1), (whole, p as i64)];
            c.extend(lattice.cyclic_classes_of_order(p as usize).into_iter().map(|id| (id, -1)));
            c
        }
        GroupKind::Dihedral(p) if p > 2 && crate::arith::is_prime(p) => {
            vec![(trivial, 1), (unique_cyclic(2)?, -2), (unique_cyclic(p)?, -1), (whole, 2)]
        }
        GroupKind::Semidirect(p, q) => {
            let q = q as i64;
            vec![(trivial, 1), (unique_cyclic(q as u64)?, -q), (unique_cyclic(p)?, -1), (whole, q)]
        }
        _ => return Err(BrauerError::NoCanonicalRelation(kind)),
    };
    let rel = BrauerRelation::new(lattice, coeffs)?;
    if !verify_relation(&rel) {
        return Err(BrauerError::CanonicalFailed(kind));
    }
    Ok(rel)
}

/// Fixed-point counts: row per element conjugacy class, column per subgroup class.
pub fn mark_matrix(lattice: &SubgroupLattice) -> IntMatrix {
    let g = lattice.group();
    let rows: Vec<Vec<i128>> = g
        .conjugacy_classes()
        .iter()
        .map(|cls| {
            lattice
                .classes()
                .iter()
                .map(|h| fixed_points(g, &h.representative, cls[0]) as i128)
                .collect()
        })
        .collect();
    IntMatrix::from_rows(&rows)
}

/// A Hermite-normalized `Z`-basis of all Brauer relations of the group.
pub fn relation_lattice(lattice: &Arc<SubgroupLattice>) -> Result<Vec<BrauerRelation>, BrauerError> {
    let kernel = integer_kernel(&mark_matrix(lattice))?;
    hermite_rows(&kernel)?
        .iter()
        .map(|v| BrauerRelation::from_vector(lattice.clone(), v))
        .collect()
}

/// Integer coordinates of `rel` in a basis returned by [`relation_lattice`].
pub fn express_in_basis(basis: &[BrauerRelation], rel: &BrauerRelation) -> Result<Option<Vec<i128>>, BrauerError> {
    let rows: Vec<Vec<i128>> = basis.iter().map(|b| b.to_vector()).collect();
    Ok(solve_in_hermite_basis(&rows, &rel.to_vector())?)
}

fn image_subgroup(target: &SubgroupLattice, h: &Subgroup, map: &[usize]) -> Result<usize, BrauerError> {
    let elems: Vec<usize> = h.elements().iter().map(|&x| map[x]).collect();
    let s = Subgroup::new(target.group(), elems)?;
    target.class_of(&s).ok_or(BrauerError::UnknownClass(usize::MAX))
}

/// Induction along an injective homomorphism `embedding: G -> G̃`
/// (`embedding[g]` is the image of `g`): each `H` is replaced by its image.
pub fn induce(
    rel: &BrauerRelation,
    target: Arc<SubgroupLattice>,
    embedding: &[usize],
) -> Result<BrauerRelation, BrauerError> {
    let source = rel.lattice.group();
    if !source.is_homomorphism(target.group(), embedding) {
        return Err(BrauerError::NotAHomomorphism);
    }
    let mut image: Vec<usize> = embedding.to_vec();
    image.sort_unstable();
    image.dedup();
    if image.len() != source.order() {
        return Err(BrauerError::NotInjective);
    }
    let coeffs = rel
        .coeffs
        .iter()
        .map(|(&id, &n)| Ok((image_subgroup(&target, &rel.lattice.class(id).representative, embedding)?, n)))
        .collect::<Result<Vec<_>, BrauerError>>()?;
    BrauerRelation::new(target, coeffs)
}

/// Inflation along a surjective homomorphism `quotient_map: Γ -> G` with
/// kernel `N`: each `H` is replaced by its preimage `NH`.
pub fn inflate(
    rel: &BrauerRelation,
    source: Arc<SubgroupLattice>,
    quotient_map: &[usize],
) -> Result<BrauerRelation, BrauerError> {
    let big = source.group();
    let small = rel.lattice.group();
    if !big.is_homomorphism(small, quotient_map) {
        return Err(BrauerError::NotAHomomorphism);
    }
    let mut hit = vec![false; small.order()];
    for &x in quotient_map {
        hit[x] = true;
    }
    if hit.iter().any(|h| !h) {
        return Err(BrauerError::NotSurjective);
    }
    let coeffs = rel
        .coeffs
        .iter()
        .map(|(&id, &n)| {
            let h = &rel.lattice.class(id).representative;
            let pre: Vec<usize> = big.elements().filter(|&x| h.contains(quotient_map[x])).collect();
            let s = Subgroup::new(big, pre)?;
            Ok((source.class_of(&s).ok_or(BrauerError::UnknownClass(usize::MAX))?, n))
        })
        .collect::<Result<Vec<_>, BrauerError>>()?;
    BrauerRelation::new(source, coeffs)
}

/// JSON view used by the `relations` command.
#[derive(Debug, Clone, Serialize)]
pub struct RelationView {
    pub coeffs: BTreeMap<String, i64>,
    pub named: BTreeMap<String, i64>,
    pub norm: NormConstant,
}

impl From<&BrauerRelation> for RelationView {
    fn from(rel: &BrauerRelation) -> Self {
        Self {
            coeffs: rel.coeffs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            named: rel.named_coeffs(),
            norm: norm_constant(rel),
        }
    }
}
