//! Finite groups given by explicit multiplication tables, plus subgroup
//! enumeration. Elements are indices into `names`; index of the identity is
//! discovered during validation.

use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("multiplication table is {0}x{1}, expected {2}x{2}")]
    TableShape(usize, usize, usize),
    #[error("table entry ({0},{1}) = {2} is out of range")]
    EntryRange(usize, usize, usize),
    #[error("no identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("associativity fails at ({0},{1},{2})")]
    NotAssociative(usize, usize, usize),
    #[error("duplicate element name {0:?}")]
    DuplicateName(String),
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub names: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    inv: Vec<usize>,
}

/// A subgroup, stored as a sorted list of element indices.
pub type Subgroup = Vec<usize>;

impl FiniteGroup {
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = names.len();
        {
            let mut seen = BTreeSet::new();
            for name in &names {
                if !seen.insert(name) {
                    return Err(GroupError::DuplicateName(name.clone()));
                }
            }
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            let rows = table.len();
            let cols = table.first().map_or(0, |r| r.len());
            return Err(GroupError::TableShape(rows, cols, n));
        }
        for (i, row) in table.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(GroupError::EntryRange(i, j, v));
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or(GroupError::NoIdentity)?;
        let mut inv = vec![0; n];
        for g in 0..n {
            inv[g] = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or(GroupError::NoInverse(g))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(FiniteGroup { names, table, identity, inv })
    }

    pub fn trivial() -> Self {
        FiniteGroup::new(vec!["e".into()], vec![vec![0]]).unwrap()
    }

    pub fn cyclic(n: usize) -> Self {
        let names = (0..n).map(|i| if i == 0 { "e".into() } else { format!("g{i}") }).collect();
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        FiniteGroup::new(names, table).unwrap()
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn closure(&self, seed: &BTreeSet<usize>) -> Subgroup {
        let mut set = seed.clone();
        set.insert(self.identity);
        loop {
            let mut grew = false;
            let current: Vec<usize> = set.iter().copied().collect();
            for &a in &current {
                if set.insert(self.inv(a)) {
                    grew = true;
                }
                for &b in &current {
                    if set.insert(self.mul(a, b)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                return set.into_iter().collect();
            }
        }
    }

    /// All subgroups, as sorted element lists, ordered by (size, elements).
    pub fn subgroups(&self) -> Vec<Subgroup> {
        let mut found: BTreeSet<Subgroup> = BTreeSet::new();
        found.insert(vec![self.identity]);
        loop {
            let mut grew = false;
            let snapshot: Vec<Subgroup> = found.iter().cloned().collect();
            for h in &snapshot {
                for g in 0..self.order() {
                    if h.contains(&g) {
                        continue;
                    }
                    let mut seed: BTreeSet<usize> = h.iter().copied().collect();
                    seed.insert(g);
                    if found.insert(self.closure(&seed)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let mut out: Vec<Subgroup> = found.into_iter().collect();
        out.sort_by_key(|h| (h.len(), h.clone()));
        out
    }

    pub fn is_subgroup(&self, h: &[usize]) -> bool {
        h.contains(&self.identity)
            && h.iter().all(|&a| h.contains(&self.inv(a)))
            && h.iter().all(|&a| h.iter().all(|&b| h.contains(&self.mul(a, b))))
    }

    /// g^{-1} H g as a sorted list.
    pub fn conjugate_subgroup(&self, h: &[usize], g: usize) -> Subgroup {
        let gi = self.inv(g);
        let mut out: Vec<usize> = h.iter().map(|&a| self.mul(self.mul(gi, a), g)).collect();
        out.sort_unstable();
        out
    }

    pub fn subgroup_name(&self, h: &[usize]) -> String {
        let names: Vec<&str> = h.iter().map(|&i| self.names[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// Symmetric group on 3 letters, used as a validation workhorse.
pub fn s3() -> FiniteGroup {
    // permutations of {0,1,2} in one-line notation
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [1, 0, 2],
        [0, 2, 1],
        [2, 1, 0],
        [1, 2, 0],
        [2, 0, 1],
    ];
    let names = vec!["e", "s01", "s12", "s02", "r120", "r201"]
        .into_iter()
        .map(String::from)
        .collect();
    let n = perms.len();
    let mut table = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            // (a*b)(x) = a(b(x))
            let prod = [perms[a][perms[b][0]], perms[a][perms[b][1]], perms[a][perms[b][2]]];
            table[a][b] = perms.iter().position(|p| *p == prod).unwrap();
        }
    }
    FiniteGroup::new(names, table).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_group() {
        let g = FiniteGroup::trivial();
        assert_eq!(g.order(), 1);
        assert_eq!(g.subgroups(), vec![vec![0]]);
    }

    #[test]
    fn cyclic_two() {
        let g = FiniteGroup::cyclic(2);
        assert_eq!(g.inv(1), 1);
        assert_eq!(g.subgroups(), vec![vec![0], vec![0, 1]]);
    }

    #[test]
    fn cyclic_four_subgroups() {
        let g = FiniteGroup::cyclic(4);
        let subs = g.subgroups();
        // 1, Z/2 = {e, g2}, Z/4
        assert_eq!(subs, vec![vec![0], vec![0, 2], vec![0, 1, 2, 3]]);
        assert!(subs.iter().all(|h| g.is_subgroup(h)));
    }

    #[test]
    fn s3_has_six_subgroups() {
        let g = s3();
        assert_eq!(g.order(), 6);
        let subs = g.subgroups();
        assert_eq!(subs.len(), 6);
        let sizes: Vec<usize> = subs.iter().map(|h| h.len()).collect();
        assert_eq!(sizes, vec![1, 2, 2, 2, 3, 6]);
        assert!(subs.iter().all(|h| g.is_subgroup(h)));
        // conjugating one 2-element subgroup hits another
        let h = &subs[1];
        let mut conjugates = BTreeSet::new();
        for gg in 0..g.order() {
            conjugates.insert(g.conjugate_subgroup(h, gg));
        }
        assert_eq!(conjugates.len(), 3);
    }

    #[test]
    fn rejects_broken_tables() {
        assert!(matches!(
            FiniteGroup::new(vec!["a".into(), "b".into()], vec![vec![0, 1], vec![1, 1]]),
            Err(GroupError::NoIdentity) | Err(GroupError::NoInverse(_))
        ));
        assert!(matches!(
            FiniteGroup::new(vec!["a".into()], vec![vec![3]]),
            Err(GroupError::EntryRange(0, 0, 3))
        ));
    }
}
