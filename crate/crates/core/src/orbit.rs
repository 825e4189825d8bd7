//! The orbit category of a finite group: objects are the subgroups H
//! (standing for G/H), morphisms G/H -> G/K are cosets gK with g^{-1}Hg ⊆ K,
//! acting by right translation.

use crate::group::{FiniteGroup, Subgroup};
use std::collections::BTreeSet;

/// A morphism G/H -> G/K, stored by subgroup indices and the canonical coset
/// representative (smallest element index in gK).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitMor {
    pub from: usize,
    pub to: usize,
    pub rep: usize,
}

pub struct OrbitCategory {
    pub group: FiniteGroup,
    pub subgroups: Vec<Subgroup>,
}

impl OrbitCategory {
    pub fn new(group: FiniteGroup) -> Self {
        let subgroups = group.subgroups();
        OrbitCategory { group, subgroups }
    }

    pub fn subgroup_index(&self, h: &[usize]) -> Option<usize> {
        self.subgroups.iter().position(|s| s == h)
    }

    fn canonical_rep(&self, k: usize, g: usize) -> usize {
        self.subgroups[k]
            .iter()
            .map(|&x| self.group.mul(g, x))
            .min()
            .unwrap()
    }

    /// The morphism determined by g, if g^{-1} H g ⊆ K.
    pub fn morphism(&self, from: usize, to: usize, g: usize) -> Option<OrbitMor> {
        let conj = self.group.conjugate_subgroup(&self.subgroups[from], g);
        let k = &self.subgroups[to];
        if conj.iter().all(|x| k.contains(x)) {
            Some(OrbitMor { from, to, rep: self.canonical_rep(to, g) })
        } else {
            None
        }
    }

    pub fn identity(&self, obj: usize) -> OrbitMor {
        self.morphism(obj, obj, self.group.identity).unwrap()
    }

    pub fn hom_set(&self, from: usize, to: usize) -> Vec<OrbitMor> {
        let mut out = BTreeSet::new();
        for g in 0..self.group.order() {
            if let Some(m) = self.morphism(from, to, g) {
                out.insert(m);
            }
        }
        out.into_iter().collect()
    }

    /// second ∘ first, i.e. apply `first` and then `second`. With cosets this
    /// is (g1 K, g2 L) -> g1 g2 L for first = g1 K : G/H -> G/K and
    /// second = g2 L : G/K -> G/L.
    pub fn compose(&self, second: &OrbitMor, first: &OrbitMor) -> OrbitMor {
        assert_eq!(first.to, second.from, "morphisms not composable");
        let g = self.group.mul(first.rep, second.rep);
        self.morphism(first.from, second.to, g)
            .expect("composite of valid morphisms is valid")
    }

    pub fn is_identity(&self, m: &OrbitMor) -> bool {
        m.from == m.to && *m == self.identity(m.from)
    }

    /// Every morphism of the category except the identities.
    pub fn all_non_identity_morphisms(&self) -> Vec<OrbitMor> {
        let mut out = vec![];
        for from in 0..self.subgroups.len() {
            for to in 0..self.subgroups.len() {
                for m in self.hom_set(from, to) {
                    if !self.is_identity(&m) {
                        out.push(m);
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{s3, FiniteGroup};

    /// |Hom(G/H, G/K)| counted directly as equivariant maps G/H -> G/K:
    /// such maps biject with points of (G/K)^H.
    fn brute_hom_count(cat: &OrbitCategory, from: usize, to: usize) -> usize {
        let g = &cat.group;
        let h = &cat.subgroups[from];
        let k = &cat.subgroups[to];
        // cosets of K
        let mut cosets: Vec<Vec<usize>> = vec![];
        for a in 0..g.order() {
            let mut c: Vec<usize> = k.iter().map(|&x| g.mul(a, x)).collect();
            c.sort_unstable();
            if !cosets.contains(&c) {
                cosets.push(c);
            }
        }
        cosets
            .iter()
            .filter(|c| {
                h.iter().all(|&hh| {
                    let mut moved: Vec<usize> = c.iter().map(|&x| g.mul(hh, x)).collect();
                    moved.sort_unstable();
                    moved == **c
                })
            })
            .count()
    }

    fn exercise(group: FiniteGroup) {
        let cat = OrbitCategory::new(group);
        let n = cat.subgroups.len();
        for from in 0..n {
            for to in 0..n {
                let hom = cat.hom_set(from, to);
                assert_eq!(hom.len(), brute_hom_count(&cat, from, to), "hom size {from}->{to}");
                // reps are canonical
                for m in &hom {
                    assert_eq!(m.rep, cat.canonical_rep(to, m.rep));
                }
            }
        }
        // identities and associativity
        for a in 0..n {
            for b in 0..n {
                for m in cat.hom_set(a, b) {
                    assert_eq!(cat.compose(&m, &cat.identity(a)), m);
                    assert_eq!(cat.compose(&cat.identity(b), &m), m);
                    for c in 0..n {
                        for m2 in cat.hom_set(b, c) {
                            let left = cat.compose(&m2, &m);
                            for d in 0..n {
                                for m3 in cat.hom_set(c, d) {
                                    let lhs = cat.compose(&m3, &left);
                                    let rhs = cat.compose(&cat.compose(&m3, &m2), &m);
                                    assert_eq!(lhs, rhs);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn trivial_group_single_object() {
        let cat = OrbitCategory::new(FiniteGroup::trivial());
        assert_eq!(cat.subgroups.len(), 1);
        assert_eq!(cat.hom_set(0, 0).len(), 1);
        assert!(cat.all_non_identity_morphisms().is_empty());
    }

    #[test]
    fn cyclic_two_category() {
        let cat = OrbitCategory::new(FiniteGroup::cyclic(2));
        // objects: G/e and G/G
        assert_eq!(cat.subgroups.len(), 2);
        assert_eq!(cat.hom_set(0, 0).len(), 2); // translations of the free orbit
        assert_eq!(cat.hom_set(0, 1).len(), 1); // projection
        assert_eq!(cat.hom_set(1, 0).len(), 0);
        assert_eq!(cat.hom_set(1, 1).len(), 1);
        exercise(FiniteGroup::cyclic(2));
    }

    #[test]
    fn small_groups_agree_with_brute_force() {
        exercise(FiniteGroup::cyclic(4));
        exercise(s3());
    }
}
