use serde::{Deserialize, Serialize};

use super::{FiniteGroup, GroupError, Subgroup};

/// Number of cosets `xH` fixed by left multiplication with `g`: the value
/// of the permutation character of `C[G/H]` at `g`.
pub fn fixed_points(g: &FiniteGroup, h: &Subgroup, elt: usize) -> usize {
    let hits = g.elements().filter(|&x| h.contains(g.conjugate(elt, x))).count();
    debug_assert_eq!(hits % h.order(), 0);
    hits / h.order()
}

/// One double coset `H x D` together with the local data of the
/// corresponding place of the fixed field of `H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleCoset {
    pub representative: usize,
    pub size: usize,
    /// `|D| / |D ∩ x⁻¹Hx|`.
    pub local_degree: usize,
    /// `|I| / |I ∩ x⁻¹Hx|`, when an inertia subgroup was supplied.
    pub e_index: Option<usize>,
    /// `local_degree / e_index`.
    pub f_index: Option<usize>,
}

/// Partition `G` into double cosets `H x D`.
///
/// With `inertia = Some(I)`, `I` must be normal in `D` with `D/I` cyclic,
/// and each record also carries the ramification and residue indices.
pub fn double_cosets(
    g: &FiniteGroup,
    h: &Subgroup,
    d: &Subgroup,
    inertia: Option<&Subgroup>,
) -> Result<Vec<DoubleCoset>, GroupError> {
    if let Some(i) = inertia {
        if !i.is_subset_of(d) || !i.is_normal_in(g, d) {
            return Err(GroupError::InertiaNotNormal(format!("{:?}", i.elements())));
        }
        if !d.quotient_is_cyclic(g, i) {
            return Err(GroupError::QuotientNotCyclic);
        }
    }
    let mut seen = vec![false; g.order()];
    let mut out = Vec::new();
    for x in g.elements() {
        if seen[x] {
            continue;
        }
        let mut size = 0;
        for &a in h.elements() {
            let ax = g.mul(a, x);
            for &b in d.elements() {
                let y = g.mul(ax, b);
                if !seen[y] {
                    seen[y] = true;
                    size += 1;
                }
            }
        }
        // |D ∩ x⁻¹Hx| = #{δ ∈ D : x δ x⁻¹ ∈ H}
        let meets = |s: &Subgroup| s.elements().iter().filter(|&&t| h.contains(g.conjugate(t, g.inv(x)))).count();
        let local_degree = d.order() / meets(d);
        let (e_index, f_index) = match inertia {
            Some(i) => {
                let e = i.order() / meets(i);
                (Some(e), Some(local_degree / e))
            }
            None => (None, None),
        };
        out.push(DoubleCoset { representative: x, size, local_degree, e_index, f_index });
    }
    Ok(out)
}
