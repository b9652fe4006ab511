//! Small finite groups given by Cayley tables.
//!
//! Elements are the integers `0..order`. Every group used by the crate is
//! built either from one of the [`GroupKind`] families or from an explicit
//! table, and in both cases the table is checked exhaustively (closure,
//! associativity, identity, inverses) before a [`FiniteGroup`] is handed out.

mod cosets;
mod subgroups;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith;

pub use cosets::{double_cosets, fixed_points, DoubleCoset};
pub use subgroups::{subgroup_classes, Subgroup, SubgroupClass, SubgroupLattice};

/// Largest group order accepted anywhere in the crate.
pub const MAX_ORDER: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("group order {0} exceeds the cap of {MAX_ORDER}")]
    TooLarge(usize),
    #[error("invalid group parameters: {0}")]
    InvalidParameters(String),
    #[error("no faithful action of C{q} on C{p}: {q} does not divide {p} - 1")]
    NoFaithfulAction { p: u64, q: u64 },
    #[error("Cayley table is not a group: {0}")]
    NotAGroup(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("{0} is not normal in the decomposition group")]
    InertiaNotNormal(String),
    #[error("decomposition group modulo inertia is not cyclic")]
    QuotientNotCyclic,
    #[error("cannot parse group spec `{0}` (expected c2xc2, d:<p>, cpxcp:<p>, sd:<p>:<q> or c:<n>)")]
    BadSpec(String),
}

/// The group families the crate knows how to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum GroupKind {
    /// `C_n`.
    Cyclic(u64),
    /// `C_p x C_p`; `ElemAbelian(2)` is the Klein four-group.
    ElemAbelian(u64),
    /// Dihedral group of order `2n`.
    Dihedral(u64),
    /// `C_p ⋊ C_q` with `C_q` acting faithfully.
    Semidirect(u64, u64),
}

impl GroupKind {
    pub fn order(&self) -> u64 {
        match *self {
            GroupKind::Cyclic(n) => n,
            GroupKind::ElemAbelian(p) => p * p,
            GroupKind::Dihedral(n) => 2 * n,
            GroupKind::Semidirect(p, q) => p * q,
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GroupKind::Cyclic(n) => write!(f, "c:{n}"),
            GroupKind::ElemAbelian(2) => write!(f, "c2xc2"),
            GroupKind::ElemAbelian(p) => write!(f, "cpxcp:{p}"),
            GroupKind::Dihedral(n) => write!(f, "d:{n}"),
            GroupKind::Semidirect(p, q) => write!(f, "sd:{p}:{q}"),
        }
    }
}

impl FromStr for GroupKind {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupError::BadSpec(s.to_string());
        let t = s.trim().to_ascii_lowercase();
        if t == "c2xc2" {
            return Ok(GroupKind::ElemAbelian(2));
        }
        let parts: Vec<&str> = t.split(':').collect();
        let num = |i: usize| parts.get(i).and_then(|x| x.parse::<u64>().ok()).ok_or_else(bad);
        match (parts[0], parts.len()) {
            ("c", 2) => Ok(GroupKind::Cyclic(num(1)?)),
            ("d", 2) => Ok(GroupKind::Dihedral(num(1)?)),
            ("cpxcp", 2) => Ok(GroupKind::ElemAbelian(num(1)?)),
            ("sd", 3) => Ok(GroupKind::Semidirect(num(1)?, num(2)?)),
            _ => Err(bad()),
        }
    }
}

impl From<GroupKind> for String {
    fn from(k: GroupKind) -> String {
        k.to_string()
    }
}

impl TryFrom<String> for GroupKind {
    type Error = GroupError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// A finite group on `0..order` with a validated multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validate a row-major Cayley table: `table[a * order + b] = a·b`.
    pub fn from_table(order: usize, table: Vec<usize>) -> Result<Self, GroupError> {
        Self::build(order, table, true)
    }

    fn build(order: usize, table: Vec<usize>, check_assoc: bool) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::NotAGroup("empty group".into()));
        }
        if order > MAX_ORDER {
            return Err(GroupError::TooLarge(order));
        }
        if table.len() != order * order {
            return Err(GroupError::NotAGroup(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if let Some(&bad) = table.iter().find(|&&x| x >= order) {
            return Err(GroupError::NotAGroup(format!("entry {bad} out of range")));
        }
        let mul = |a: usize, b: usize| table[a * order + b];
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| mul(e, a) == a && mul(a, e) == a))
            .ok_or_else(|| GroupError::NotAGroup("no two-sided identity".into()))?;
        let mut inverses = vec![0; order];
        for a in 0..order {
            inverses[a] = (0..order)
                .find(|&b| mul(a, b) == identity && mul(b, a) == identity)
                .ok_or_else(|| GroupError::NotAGroup(format!("element {a} has no inverse")))?;
        }
        for a in (0..order).filter(|_| check_assoc) {
            for b in 0..order {
                let ab = mul(a, b);
                for c in 0..order {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(GroupError::NotAGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(Self { order, table, identity, inverses })
    }

    // Only for rules associative by construction; identity and inverses are still checked.
    fn from_rule(order: usize, rule: impl Fn(usize, usize) -> usize) -> Result<Self, GroupError> {
        if order > MAX_ORDER {
            return Err(GroupError::TooLarge(order));
        }
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                table.push(rule(a, b));
            }
        }
        Self::build(order, table, false)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `x⁻¹ g x`.
    #[inline]
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.inv(x), self.mul(g, x))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Conjugacy classes of elements, each sorted, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut out = Vec::new();
        for g in self.elements() {
            if seen[g] {
                continue;
            }
            let mut class: Vec<usize> = self.elements().map(|x| self.conjugate(g, x)).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                seen[c] = true;
            }
            out.push(class);
        }
        out
    }

    /// The subgroup generated by `gens`.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut member = vec![false; self.order];
        member[self.identity] = true;
        let mut elems = vec![self.identity];
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    elems.push(y);
                }
            }
            i += 1;
        }
        Subgroup::from_sorted(member.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i).collect())
    }

    /// `G × H` with `(g, h)` stored at index `g + |G|·h`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
        let n = self.order;
        Self::from_rule(n * other.order, |a, b| {
            let (a1, a2) = (a % n, a / n);
            let (b1, b2) = (b % n, b / n);
            self.mul(a1, b1) + n * other.mul(a2, b2)
        })
    }

    /// The same group with element `g` renamed to `perm[g]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<FiniteGroup, GroupError> {
        let n = self.order;
        if perm.len() != n {
            return Err(GroupError::InvalidParameters("relabelling has wrong length".into()));
        }
        let mut inv = vec![usize::MAX; n];
        for (g, &p) in perm.iter().enumerate() {
            if p >= n || inv[p] != usize::MAX {
                return Err(GroupError::InvalidParameters("relabelling is not a permutation".into()));
            }
            inv[p] = g;
        }
        Self::from_rule(n, |a, b| perm[self.mul(inv[a], inv[b])])
    }

    /// Whether `map: self -> target` respects multiplication.
    pub fn is_homomorphism(&self, target: &FiniteGroup, map: &[usize]) -> bool {
        map.len() == self.order
            && map.iter().all(|&x| x < target.order)
            && self.elements().all(|a| {
                self.elements().all(|b| map[self.mul(a, b)] == target.mul(map[a], map[b]))
            })
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(self.elements().collect())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::from_sorted(vec![self.identity])
    }
}

/// Build a group from one of the supported families.
pub fn make_group(kind: GroupKind) -> Result<FiniteGroup, GroupError> {
    let order = kind.order();
    if order as usize > MAX_ORDER || order > MAX_ORDER as u64 {
        return Err(GroupError::TooLarge(order as usize));
    }
    match kind {
        GroupKind::Cyclic(n) => {
            if n == 0 {
                return Err(GroupError::InvalidParameters("cyclic group of order 0".into()));
            }
            let n = n as usize;
            FiniteGroup::from_rule(n, |a, b| (a + b) % n)
        }
        GroupKind::ElemAbelian(p) => {
            if !arith::is_prime(p) {
                return Err(GroupError::InvalidParameters(format!("{p} is not prime")));
            }
            let p = p as usize;
            FiniteGroup::from_rule(p * p, |a, b| {
                let (a0, a1) = (a % p, a / p);
                let (b0, b1) = (b % p, b / p);
                (a0 + b0) % p + p * ((a1 + b1) % p)
            })
        }
        GroupKind::Dihedral(n) => {
            if n < 2 {
                return Err(GroupError::InvalidParameters(format!("dihedral group needs n >= 2, got {n}")));
            }
            // r^i s^j at index i + n·j; s r s⁻¹ = r⁻¹
            let n = n as usize;
            FiniteGroup::from_rule(2 * n, |a, b| {
                let (i, j) = (a % n, a / n);
                let (k, l) = (b % n, b / n);
                let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
                rot + n * ((j + l) % 2)
            })
        }
        GroupKind::Semidirect(p, q) => {
            if !arith::is_prime(p) || !arith::is_prime(q) || q == 2 {
                return Err(GroupError::InvalidParameters(format!(
                    "sd:{p}:{q} needs primes p and q with q odd"
                )));
            }
            if (p - 1) % q != 0 {
                return Err(GroupError::NoFaithfulAction { p, q });
            }
            let u = semidirect_unit(p, q);
            // x^i y^j at index i + p·j; y x y⁻¹ = x^u
            let mut upow = vec![1u64; q as usize];
            for j in 1..q as usize {
                upow[j] = upow[j - 1] * u % p;
            }
            let (pu, qu) = (p as usize, q as usize);
            FiniteGroup::from_rule(pu * qu, |a, b| {
                let (i, j) = (a % pu, a / pu);
                let (k, l) = (b % pu, b / pu);
                (i + upow[j] as usize * k) % pu + pu * ((j + l) % qu)
            })
        }
    }
}

/// Smallest `u > 1` of multiplicative order exactly `q` modulo `p`.
pub fn semidirect_unit(p: u64, q: u64) -> u64 {
    (2..p)
        .find(|&u| arith::multiplicative_order(u, p) == q)
        .expect("q divides p - 1, so an element of order q exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_has_three_element_classes() {
        let g = make_group(GroupKind::Dihedral(3)).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.conjugacy_classes().len(), 3);
        assert!(!g.is_abelian());
    }

    #[test]
    fn semidirect_families() {
        let g = make_group(GroupKind::Semidirect(7, 3)).unwrap();
        assert_eq!(g.order(), 21);
        assert!(!g.is_abelian());
        // C7 ⋊ C3 has classes {1}, two classes of order-7 elements, two of order-3 elements
        assert_eq!(g.conjugacy_classes().len(), 5);
        assert_eq!(semidirect_unit(7, 3), 2);
        assert_eq!(
            make_group(GroupKind::Semidirect(5, 3)),
            Err(GroupError::NoFaithfulAction { p: 5, q: 3 })
        );
        assert!(make_group(GroupKind::Semidirect(7, 2)).is_err());
        assert!(matches!(make_group(GroupKind::Semidirect(31, 5)), Ok(g) if g.order() == 155));
    }

    #[test]
    fn constructions_pass_full_validation() {
        let kinds = [
            GroupKind::Cyclic(12),
            GroupKind::ElemAbelian(5),
            GroupKind::Dihedral(6),
            GroupKind::Semidirect(7, 3),
            GroupKind::Semidirect(13, 3),
        ];
        for kind in kinds {
            let g = make_group(kind).unwrap();
            assert!(FiniteGroup::from_table(g.order(), g.table().to_vec()).is_ok(), "{kind}");
        }
        let a = make_group(GroupKind::Dihedral(3)).unwrap();
        let b = make_group(GroupKind::Cyclic(4)).unwrap();
        let p = a.direct_product(&b).unwrap();
        let perm: Vec<usize> = (0..24).map(|x| (x * 5) % 24).collect();
        let r = p.relabel(&perm).unwrap();
        for g in [p, r] {
            assert!(FiniteGroup::from_table(g.order(), g.table().to_vec()).is_ok());
        }
    }

    #[test]
    fn order_cap() {
        assert_eq!(make_group(GroupKind::ElemAbelian(17)), Err(GroupError::TooLarge(289)));
        assert!(make_group(GroupKind::Dihedral(100)).is_ok());
        assert!(make_group(GroupKind::Dihedral(101)).is_err());
    }

    #[test]
    fn rejects_broken_tables() {
        // Z/3 with one entry corrupted
        let mut t: Vec<usize> = (0..9).map(|i| (i / 3 + i % 3) % 3).collect();
        assert!(FiniteGroup::from_table(3, t.clone()).is_ok());
        t[4] = 0;
        assert!(FiniteGroup::from_table(3, t).is_err());
        // a non-associative Latin square with identity 0
        let t = vec![0, 1, 2, 3, 4, 1, 0, 3, 4, 2, 2, 4, 0, 1, 3, 3, 2, 4, 0, 1, 4, 3, 1, 2, 0];
        assert!(matches!(FiniteGroup::from_table(5, t), Err(GroupError::NotAGroup(_))));
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in ["c2xc2", "d:5", "cpxcp:3", "sd:7:3", "c:6"] {
            let k: GroupKind = s.parse().unwrap();
            assert_eq!(k.to_string(), s);
        }
        assert_eq!("cpxcp:2".parse::<GroupKind>().unwrap().to_string(), "c2xc2");
        assert!("d5".parse::<GroupKind>().is_err());
        assert!("sd:7".parse::<GroupKind>().is_err());
    }

    #[test]
    fn products_and_relabelling() {
        let c2 = make_group(GroupKind::Cyclic(2)).unwrap();
        let v4 = make_group(GroupKind::ElemAbelian(2)).unwrap();
        let g = c2.direct_product(&v4).unwrap();
        assert_eq!(g.order(), 8);
        assert!(g.is_abelian());
        let perm: Vec<usize> = (0..8).rev().collect();
        let h = g.relabel(&perm).unwrap();
        assert!(g.is_homomorphism(&h, &perm));
    }
}
