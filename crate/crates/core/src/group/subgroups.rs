use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{FiniteGroup, GroupError};

/// A subgroup, stored as its sorted element set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub(crate) fn from_sorted(elements: Vec<usize>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Self { elements }
    }

    /// Check that `elements` is a subgroup of `g`.
    pub fn new(g: &FiniteGroup, mut elements: Vec<usize>) -> Result<Self, GroupError> {
        elements.sort_unstable();
        elements.dedup();
        let set: HashSet<usize> = elements.iter().copied().collect();
        if elements.iter().any(|&x| x >= g.order()) {
            return Err(GroupError::NotASubgroup("element out of range".into()));
        }
        if !set.contains(&g.identity()) {
            return Err(GroupError::NotASubgroup("missing identity".into()));
        }
        for &a in &elements {
            if !set.contains(&g.inv(a)) {
                return Err(GroupError::NotASubgroup(format!("not closed under inverse at {a}")));
            }
            for &b in &elements {
                if !set.contains(&g.mul(a, b)) {
                    return Err(GroupError::NotASubgroup(format!("not closed at ({a}, {b})")));
                }
            }
        }
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup::from_sorted(self.elements.iter().copied().filter(|&x| other.contains(x)).collect())
    }

    /// `x⁻¹ H x`.
    pub fn conjugate_by(&self, g: &FiniteGroup, x: usize) -> Subgroup {
        let mut e: Vec<usize> = self.elements.iter().map(|&h| g.conjugate(h, x)).collect();
        e.sort_unstable();
        Subgroup::from_sorted(e)
    }

    /// Normal inside `ambient` (which must contain `self`).
    pub fn is_normal_in(&self, g: &FiniteGroup, ambient: &Subgroup) -> bool {
        ambient
            .elements
            .iter()
            .all(|&x| self.elements.iter().all(|&h| self.contains(g.conjugate(h, x))))
    }

    pub fn is_cyclic(&self, g: &FiniteGroup) -> bool {
        self.elements.iter().any(|&x| g.element_order(x) == self.order())
    }

    /// Whether `self / normal` is cyclic; `normal` must be normal in `self`.
    pub fn quotient_is_cyclic(&self, g: &FiniteGroup, normal: &Subgroup) -> bool {
        let target = self.order();
        self.elements.iter().any(|&d| {
            let mut gens = normal.elements.clone();
            gens.push(d);
            g.generate(&gens).order() == target
        })
    }

    /// `N_G(H)` as an element count.
    pub fn normalizer_order(&self, g: &FiniteGroup) -> usize {
        g.elements().filter(|&x| self.conjugate_by(g, x) == *self).count()
    }
}

/// One conjugacy class of subgroups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupClass {
    /// Conjugate with the lexicographically smallest sorted element set.
    pub representative: Subgroup,
    pub class_size: usize,
    pub class_id: usize,
    /// Short label: `1`, `G`, `C<n>`, `C<n>a`, `H<n>b`, ...
    pub name: String,
}

impl SubgroupClass {
    pub fn order(&self) -> usize {
        self.representative.order()
    }
}

/// A group together with all of its subgroups, up to conjugacy.
#[derive(Debug, Clone)]
pub struct SubgroupLattice {
    group: FiniteGroup,
    classes: Vec<SubgroupClass>,
    members: Vec<Vec<Subgroup>>,
    index: HashMap<Subgroup, usize>,
}

impl SubgroupLattice {
    pub fn new(group: FiniteGroup) -> Self {
        let all = all_subgroups(&group);
        let mut assigned: HashSet<&Subgroup> = HashSet::new();
        let mut raw: Vec<(Subgroup, Vec<Subgroup>)> = Vec::new();
        for s in &all {
            if assigned.contains(s) {
                continue;
            }
            let mut conj: Vec<Subgroup> = group.elements().map(|x| s.conjugate_by(&group, x)).collect();
            conj.sort();
            conj.dedup();
            for c in &conj {
                assigned.insert(all.get(c).expect("conjugate of a subgroup is a subgroup"));
            }
            raw.push((conj[0].clone(), conj));
        }
        raw.sort_by(|a, b| (a.0.order(), &a.0).cmp(&(b.0.order(), &b.0)));

        let mut classes = Vec::with_capacity(raw.len());
        let mut members = Vec::with_capacity(raw.len());
        let mut index = HashMap::new();
        for (id, (rep, conj)) in raw.into_iter().enumerate() {
            for c in &conj {
                index.insert(c.clone(), id);
            }
            classes.push(SubgroupClass {
                representative: rep,
                class_size: conj.len(),
                class_id: id,
                name: String::new(),
            });
            members.push(conj);
        }
        assign_names(&group, &mut classes);
        Self { group, classes, members, index }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn class(&self, id: usize) -> &SubgroupClass {
        &self.classes[id]
    }

    /// Every conjugate in class `id`.
    pub fn members(&self, id: usize) -> &[Subgroup] {
        &self.members[id]
    }

    /// All subgroups, class by class.
    pub fn all_subgroups(&self) -> impl Iterator<Item = &Subgroup> {
        self.members.iter().flatten()
    }

    pub fn class_of(&self, h: &Subgroup) -> Option<usize> {
        self.index.get(h).copied()
    }

    pub fn trivial_class(&self) -> usize {
        0
    }

    pub fn whole_class(&self) -> usize {
        self.classes.len() - 1
    }

    pub fn class_by_name(&self, name: &str) -> Option<usize> {
        let name = name.trim();
        if let Some(id) = name.strip_prefix('#') {
            return id.parse::<usize>().ok().filter(|&i| i < self.classes.len());
        }
        self.classes.iter().position(|c| c.name.eq_ignore_ascii_case(name))
    }

    /// Classes of cyclic subgroups of order `n`.
    pub fn cyclic_classes_of_order(&self, n: usize) -> Vec<usize> {
        self.classes
            .iter()
            .filter(|c| c.order() == n && c.representative.is_cyclic(&self.group))
            .map(|c| c.class_id)
            .collect()
    }
}

/// One representative per conjugacy class of subgroups, sorted by
/// `(order, canonical element set)`.
pub fn subgroup_classes(g: &FiniteGroup) -> Vec<SubgroupClass> {
    SubgroupLattice::new(g.clone()).classes
}

// Cyclic subgroups first, then close under joins with cyclic subgroups.
fn all_subgroups(g: &FiniteGroup) -> HashSet<Subgroup> {
    let mut cyclic: Vec<(usize, Subgroup)> = Vec::new();
    let mut seen: HashSet<Subgroup> = HashSet::new();
    for x in g.elements() {
        let c = g.generate(&[x]);
        if seen.insert(c.clone()) {
            cyclic.push((x, c));
        }
    }
    let mut all: HashSet<Subgroup> = seen;
    let mut frontier: Vec<Subgroup> = all.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for (x, c) in &cyclic {
                if c.is_subset_of(s) {
                    continue;
                }
                let mut gens = s.elements().to_vec();
                gens.push(*x);
                let j = g.generate(&gens);
                if !all.contains(&j) {
                    all.insert(j.clone());
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    all
}

fn assign_names(g: &FiniteGroup, classes: &mut [SubgroupClass]) {
    let last = classes.len() - 1;
    let bases: Vec<String> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if i == 0 {
                "1".to_string()
            } else if i == last {
                "G".to_string()
            } else if c.representative.is_cyclic(g) {
                format!("C{}", c.order())
            } else {
                format!("H{}", c.order())
            }
        })
        .collect();
    for i in 0..classes.len() {
        let same: Vec<usize> = (0..classes.len()).filter(|&j| bases[j] == bases[i]).collect();
        classes[i].name = if same.len() == 1 {
            bases[i].clone()
        } else {
            let k = same.iter().position(|&j| j == i).unwrap();
            format!("{}{}", bases[i], letter_suffix(k))
        };
    }
}

fn letter_suffix(mut k: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'a' + (k % 26) as u8);
        if k < 26 {
            break;
        }
        k = k / 26 - 1;
    }
    s.reverse();
    String::from_utf8(s).unwrap()
}
