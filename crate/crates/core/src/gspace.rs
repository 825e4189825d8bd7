//! Simplicial sets with an action of a finite group: validation, fixed-point
//! subcomplexes for each subgroup, and quotients of free actions.

use crate::group::FiniteGroup;
use crate::simplicial::{SimplicialError, SimplicialMap, TruncatedSimplicialSet};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GSpaceError {
    #[error("need one simplicial map per group element, got {0} for a group of order {1}")]
    ActionCount(usize, usize),
    #[error("action of {element:?} is not simplicial: {source}")]
    NotSimplicial { element: String, source: SimplicialError },
    #[error("action is not functorial: {0:?} . {1:?} != {2:?} at level {3} simplex {4:?}")]
    NotFunctorial(String, String, String, usize, String),
    #[error("identity element does not act as the identity at level {0} simplex {1:?}")]
    IdentityMoves(usize, String),
    #[error("action is not free: {element:?} fixes level {level} simplex {simplex:?}")]
    NotFree { element: String, level: usize, simplex: String },
}

#[derive(Clone, Debug)]
pub struct GSimplicialSet {
    pub group: FiniteGroup,
    pub space: TruncatedSimplicialSet,
    /// action[g] for each group element index
    pub action: Vec<SimplicialMap>,
}

/// The H-fixed subcomplex of a G-simplicial set, with the index translation
/// in both directions.
#[derive(Clone, Debug)]
pub struct FixedPart {
    pub set: TruncatedSimplicialSet,
    /// include[n][fixed index] = ambient index
    pub include: Vec<Vec<usize>>,
    /// ambient index -> fixed index, where defined
    pub back: Vec<HashMap<usize, usize>>,
}

impl GSimplicialSet {
    pub fn new(
        group: FiniteGroup,
        space: TruncatedSimplicialSet,
        action: Vec<SimplicialMap>,
    ) -> Result<Self, GSpaceError> {
        if action.len() != group.order() {
            return Err(GSpaceError::ActionCount(action.len(), group.order()));
        }
        for g in 0..group.order() {
            action[g]
                .validate(&space, &space)
                .map_err(|source| GSpaceError::NotSimplicial { element: group.names[g].clone(), source })?;
        }
        for n in 0..=space.n_max() {
            for idx in 0..space.size(n) {
                if action[group.identity].apply(n, idx) != idx {
                    return Err(GSpaceError::IdentityMoves(n, space.name(n, idx).to_string()));
                }
            }
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                let ab = group.mul(a, b);
                for n in 0..=space.n_max() {
                    for idx in 0..space.size(n) {
                        let two_step = action[a].apply(n, action[b].apply(n, idx));
                        if two_step != action[ab].apply(n, idx) {
                            return Err(GSpaceError::NotFunctorial(
                                group.names[a].clone(),
                                group.names[b].clone(),
                                group.names[ab].clone(),
                                n,
                                space.name(n, idx).to_string(),
                            ));
                        }
                    }
                }
            }
        }
        Ok(GSimplicialSet { group, space, action })
    }

    /// Action given on nondegenerate simplices only (by index per level),
    /// extended to degenerate ones along the degeneracy tables.
    pub fn from_nondegenerate_action(
        group: FiniteGroup,
        space: TruncatedSimplicialSet,
        images: &[Vec<HashMap<usize, usize>>],
    ) -> Result<Self, GSpaceError> {
        if images.len() != group.order() {
            return Err(GSpaceError::ActionCount(images.len(), group.order()));
        }
        let action: Vec<SimplicialMap> = images
            .iter()
            .map(|im| SimplicialMap::from_nondegenerate_images(&space, &space, im))
            .collect();
        Self::new(group, space, action)
    }

    pub fn trivial_action(group: FiniteGroup, space: TruncatedSimplicialSet) -> Self {
        let id = SimplicialMap::identity(&space);
        let action = vec![id; group.order()];
        Self::new(group, space, action).expect("trivial action is valid")
    }

    pub fn act(&self, g: usize, n: usize, idx: usize) -> usize {
        self.action[g].apply(n, idx)
    }

    /// Subcomplex of simplices fixed by every element of `h`.
    pub fn fixed_points(&self, h: &[usize]) -> FixedPart {
        let space = &self.space;
        let n_max = space.n_max();
        let mut include: Vec<Vec<usize>> = vec![];
        let mut back: Vec<HashMap<usize, usize>> = vec![];
        for n in 0..=n_max {
            let keep: Vec<usize> = (0..space.size(n))
                .filter(|&idx| h.iter().all(|&g| self.act(g, n, idx) == idx))
                .collect();
            let mut b = HashMap::new();
            for (new, &old) in keep.iter().enumerate() {
                b.insert(old, new);
            }
            include.push(keep);
            back.push(b);
        }
        let mut names = vec![];
        let mut faces = vec![];
        let mut degs = vec![];
        for n in 0..=n_max {
            names.push(include[n].iter().map(|&i| space.name(n, i).to_string()).collect());
            faces.push(
                include[n]
                    .iter()
                    .map(|&i| {
                        (0..if n == 0 { 0 } else { n + 1 })
                            .map(|k| back[n - 1][&space.face(n, i, k)])
                            .collect()
                    })
                    .collect(),
            );
            if n < n_max {
                degs.push(
                    include[n]
                        .iter()
                        .map(|&i| (0..=n).map(|k| back[n + 1][&space.degeneracy(n, i, k)]).collect())
                        .collect(),
                );
            } else {
                degs.push(vec![]);
            }
        }
        let set = TruncatedSimplicialSet::from_tables(names, faces, degs);
        FixedPart { set, include, back }
    }

    /// Orbit space of a free action, together with the projection.
    pub fn quotient(&self) -> Result<(TruncatedSimplicialSet, SimplicialMap), GSpaceError> {
        let space = &self.space;
        let group = &self.group;
        let n_max = space.n_max();
        for n in 0..=n_max {
            for idx in 0..space.size(n) {
                for g in 0..group.order() {
                    if g != group.identity && self.act(g, n, idx) == idx {
                        return Err(GSpaceError::NotFree {
                            element: group.names[g].clone(),
                            level: n,
                            simplex: space.name(n, idx).to_string(),
                        });
                    }
                }
            }
        }
        let mut proj: Vec<Vec<usize>> = vec![];
        let mut reps: Vec<Vec<usize>> = vec![];
        for n in 0..=n_max {
            let mut p = vec![usize::MAX; space.size(n)];
            let mut r = vec![];
            for idx in 0..space.size(n) {
                if p[idx] != usize::MAX {
                    continue;
                }
                let orbit_index = r.len();
                r.push(idx);
                for g in 0..group.order() {
                    p[self.act(g, n, idx)] = orbit_index;
                }
            }
            proj.push(p);
            reps.push(r);
        }
        let mut names = vec![];
        let mut faces = vec![];
        let mut degs = vec![];
        for n in 0..=n_max {
            names.push(reps[n].iter().map(|&i| space.name(n, i).to_string()).collect());
            faces.push(
                reps[n]
                    .iter()
                    .map(|&i| {
                        (0..if n == 0 { 0 } else { n + 1 })
                            .map(|k| proj[n - 1][space.face(n, i, k)])
                            .collect()
                    })
                    .collect(),
            );
            if n < n_max {
                degs.push(
                    reps[n]
                        .iter()
                        .map(|&i| (0..=n).map(|k| proj[n + 1][space.degeneracy(n, i, k)]).collect())
                        .collect(),
                );
            } else {
                degs.push(vec![]);
            }
        }
        let set = TruncatedSimplicialSet::from_tables(names, faces, degs);
        Ok((set, SimplicialMap { levels: proj }))
    }
}

/// A G-simplicial set bundled with its orbit category and the fixed-point
/// subcomplex of every subgroup, indexed consistently.
pub struct GContext {
    pub gs: GSimplicialSet,
    pub cat: crate::orbit::OrbitCategory,
    /// fixed[h] for each subgroup index of `cat`
    pub fixed: Vec<FixedPart>,
}

impl GContext {
    pub fn new(gs: GSimplicialSet) -> Self {
        let cat = crate::orbit::OrbitCategory::new(gs.group.clone());
        let fixed = cat.subgroups.iter().map(|h| gs.fixed_points(h)).collect();
        GContext { gs, cat, fixed }
    }

    /// Ambient vertices of X^H.
    pub fn fixed_vertices(&self, h: usize) -> &[usize] {
        &self.fixed[h].include[0]
    }

    /// Ambient indices of the nondegenerate n-simplices of X^H.
    pub fn fixed_nondegenerate(&self, h: usize, n: usize) -> Vec<usize> {
        self.fixed[h]
            .set
            .nondegenerate(n)
            .into_iter()
            .map(|i| self.fixed[h].include[n][i])
            .collect()
    }
}

/// f: X -> Y commutes with both actions (the groups must be the same).
pub fn is_equivariant(f: &SimplicialMap, x: &GSimplicialSet, y: &GSimplicialSet) -> bool {
    assert_eq!(x.group.order(), y.group.order());
    (0..x.group.order()).all(|g| {
        (0..=x.space.n_max()).all(|n| {
            (0..x.space.size(n)).all(|idx| f.apply(n, x.act(g, n, idx)) == y.act(g, n, f.apply(n, idx)))
        })
    })
}
