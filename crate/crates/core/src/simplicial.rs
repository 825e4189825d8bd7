//! Truncated simplicial sets with explicit levelwise storage. Degenerate
//! simplices are materialized with canonical degeneracy words (strictly
//! decreasing operator indices, leftmost applied last), so every simplex has
//! a unique (word, nondegenerate base) decomposition.

use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimplicialError {
    #[error("duplicate simplex name {1:?} at level {0}")]
    DuplicateName(usize, String),
    #[error("level {level} simplex {simplex:?}: face {slot} references unknown name {name:?}")]
    UnknownFace { level: usize, simplex: String, slot: usize, name: String },
    #[error("level {level} simplex {simplex:?} lists {got} faces, expected {expected}")]
    WrongFaceCount { level: usize, simplex: String, got: usize, expected: usize },
    #[error("level {level} would hold {size} simplices, over the limit {max}")]
    LevelTooLarge { level: usize, size: usize, max: usize },
    #[error("simplicial identity {identity} fails at {witness}")]
    IdentityViolation { identity: String, witness: String },
    #[error("degeneracy bookkeeping broken at {witness}")]
    DecompositionViolation { witness: String },
}

pub const DEFAULT_LEVEL_LIMIT: usize = 50_000;

#[derive(Clone, Debug, Default)]
pub struct SimplicialLevel {
    pub names: Vec<String>,
    /// faces[idx][i] = index of the i-th face one level down; empty at level 0
    pub faces: Vec<Vec<usize>>,
    /// degeneracies[idx][i] = index of s_i(simplex) one level up; present on
    /// every level except the truncation top
    pub degeneracies: Vec<Vec<usize>>,
    /// canonical decomposition: (strictly decreasing degeneracy word, index of
    /// the nondegenerate base at level `level - word.len()`)
    pub ez: Vec<(Vec<usize>, usize)>,
}

#[derive(Clone, Debug)]
pub struct TruncatedSimplicialSet {
    pub levels: Vec<SimplicialLevel>,
}

/// One nondegenerate simplex in builder input: its name and the names of its
/// n+1 faces (which may be canonical degenerate names such as "s0(v)").
#[derive(Clone, Debug)]
pub struct NondegSpec {
    pub name: String,
    pub faces: Vec<String>,
}

/// Canonical word after prepending s_i to a canonical word: bump letters >= i
/// and place i so the word stays strictly decreasing.
pub fn insert_degeneracy(i: usize, w: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = w.iter().map(|&j| if j >= i { j + 1 } else { j }).collect();
    let pos = out.iter().position(|&j| j < i).unwrap_or(out.len());
    out.insert(pos, i);
    out
}

pub fn canonical_degenerate_name(word: &[usize], base: &str) -> String {
    let ops: String = word.iter().map(|j| format!("s{j}")).collect();
    format!("{ops}({base})")
}

impl TruncatedSimplicialSet {
    pub fn n_max(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn size(&self, n: usize) -> usize {
        self.levels[n].names.len()
    }

    pub fn name(&self, n: usize, idx: usize) -> &str {
        &self.levels[n].names[idx]
    }

    pub fn index_of(&self, n: usize, name: &str) -> Option<usize> {
        self.levels[n].names.iter().position(|s| s == name)
    }

    pub fn face(&self, n: usize, idx: usize, i: usize) -> usize {
        self.levels[n].faces[idx][i]
    }

    pub fn degeneracy(&self, n: usize, idx: usize, i: usize) -> usize {
        self.levels[n].degeneracies[idx][i]
    }

    pub fn is_nondegenerate(&self, n: usize, idx: usize) -> bool {
        self.levels[n].ez[idx].0.is_empty()
    }

    /// Indices of the nondegenerate simplices at level n.
    pub fn nondegenerate(&self, n: usize) -> Vec<usize> {
        (0..self.size(n)).filter(|&i| self.is_nondegenerate(n, i)).collect()
    }

    /// (word, base level, base index) of the canonical decomposition.
    pub fn decompose(&self, n: usize, idx: usize) -> (&[usize], usize, usize) {
        let (w, b) = &self.levels[n].ez[idx];
        (w, n - w.len(), *b)
    }

    /// Dimension of the nondegenerate base.
    pub fn nondeg_dimension(&self, n: usize, idx: usize) -> usize {
        n - self.levels[n].ez[idx].0.len()
    }

    /// Build from nondegenerate data; degenerate simplices are generated with
    /// canonical names. Face lists are resolved by name but the simplicial
    /// identities are NOT checked here; call `validate` afterwards.
    pub fn from_nondegenerate(
        input: &[Vec<NondegSpec>],
        level_limit: usize,
    ) -> Result<Self, SimplicialError> {
        assert!(!input.is_empty());
        let n_max = input.len() - 1;
        let mut levels: Vec<SimplicialLevel> = vec![SimplicialLevel::default(); n_max + 1];
        // (word, base) -> index, per level
        let mut lookup: Vec<HashMap<(Vec<usize>, usize), usize>> = vec![HashMap::new(); n_max + 1];
        let mut names_seen: Vec<HashMap<String, usize>> = vec![HashMap::new(); n_max + 1];

        let push = |levels: &mut Vec<SimplicialLevel>,
                        lookup: &mut Vec<HashMap<(Vec<usize>, usize), usize>>,
                        names_seen: &mut Vec<HashMap<String, usize>>,
                        n: usize,
                        name: String,
                        faces: Vec<usize>,
                        ez: (Vec<usize>, usize)|
         -> Result<usize, SimplicialError> {
            if names_seen[n].contains_key(&name) {
                return Err(SimplicialError::DuplicateName(n, name));
            }
            if levels[n].names.len() >= level_limit {
                return Err(SimplicialError::LevelTooLarge {
                    level: n,
                    size: levels[n].names.len() + 1,
                    max: level_limit,
                });
            }
            let idx = levels[n].names.len();
            names_seen[n].insert(name.clone(), idx);
            lookup[n].insert(ez.clone(), idx);
            levels[n].names.push(name);
            levels[n].faces.push(faces);
            levels[n].ez.push(ez);
            Ok(idx)
        };

        // level 0: everything nondegenerate
        for spec in &input[0] {
            if !spec.faces.is_empty() {
                return Err(SimplicialError::WrongFaceCount {
                    level: 0,
                    simplex: spec.name.clone(),
                    got: spec.faces.len(),
                    expected: 0,
                });
            }
            let idx = levels[0].names.len();
            push(&mut levels, &mut lookup, &mut names_seen, 0, spec.name.clone(), vec![], (vec![], idx))?;
        }

        for n in 1..=n_max {
            // degeneracies of every level n-1 simplex
            let below = levels[n - 1].names.len();
            levels[n - 1].degeneracies = vec![vec![usize::MAX; n]; below];
            for idx in 0..below {
                for i in 0..n {
                    let (w, b) = levels[n - 1].ez[idx].clone();
                    let word = insert_degeneracy(i, &w);
                    let key = (word.clone(), b);
                    let target = if let Some(&t) = lookup[n].get(&key) {
                        t
                    } else {
                        let base_level = n - word.len();
                        let base_name = levels[base_level].names[b].clone();
                        let name = canonical_degenerate_name(&word, &base_name);
                        let mut faces = Vec::with_capacity(n + 1);
                        for fi in 0..=n {
                            faces.push(degenerate_face(&levels, &lookup, n, fi, &word, b));
                        }
                        push(&mut levels, &mut lookup, &mut names_seen, n, name, faces, key)?
                    };
                    levels[n - 1].degeneracies[idx][i] = target;
                }
            }
            // user nondegenerate simplices
            for spec in &input[n] {
                if spec.faces.len() != n + 1 {
                    return Err(SimplicialError::WrongFaceCount {
                        level: n,
                        simplex: spec.name.clone(),
                        got: spec.faces.len(),
                        expected: n + 1,
                    });
                }
                let mut faces = Vec::with_capacity(n + 1);
                for (slot, fname) in spec.faces.iter().enumerate() {
                    let Some(&fidx) = names_seen[n - 1].get(fname) else {
                        return Err(SimplicialError::UnknownFace {
                            level: n,
                            simplex: spec.name.clone(),
                            slot,
                            name: fname.clone(),
                        });
                    };
                    faces.push(fidx);
                }
                let idx = levels[n].names.len();
                push(&mut levels, &mut lookup, &mut names_seen, n, spec.name.clone(), faces, (vec![], idx))?;
            }
        }
        Ok(TruncatedSimplicialSet { levels })
    }

    /// Raw constructor for already-materialized data (used for products and
    /// pullbacks); fills in the canonical decompositions.
    pub fn from_tables(
        names: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degeneracies: Vec<Vec<Vec<usize>>>,
    ) -> Self {
        let n_max = names.len() - 1;
        let mut levels: Vec<SimplicialLevel> = names
            .into_iter()
            .zip(faces)
            .enumerate()
            .map(|(n, (names, faces))| SimplicialLevel {
                names,
                faces,
                degeneracies: if n < n_max { degeneracies[n].clone() } else { vec![] },
                ez: vec![],
            })
            .collect();
        for n in 0..=n_max {
            let count = levels[n].names.len();
            let mut ez = Vec::with_capacity(count);
            for idx in 0..count {
                let hit = (0..n).find(|&i| {
                    let y = levels[n].faces[idx][i + 1];
                    levels[n - 1].degeneracies[y][i] == idx
                });
                match hit {
                    None => ez.push((vec![], idx)),
                    Some(i) => {
                        let y = levels[n].faces[idx][i + 1];
                        let (w, b) = levels[n - 1].ez[y].clone();
                        ez.push((insert_degeneracy(i, &w), b));
                    }
                }
            }
            levels[n].ez = ez;
        }
        TruncatedSimplicialSet { levels }
    }

    /// Check every simplicial identity expressible within the truncation,
    /// plus consistency of the stored decompositions.
    pub fn validate(&self) -> Result<(), SimplicialError> {
        let n_max = self.n_max();
        for n in 0..=n_max {
            let lvl = &self.levels[n];
            assert_eq!(lvl.names.len(), lvl.faces.len());
            assert_eq!(lvl.names.len(), lvl.ez.len());
            for idx in 0..lvl.names.len() {
                if lvl.faces[idx].len() != if n == 0 { 0 } else { n + 1 } {
                    return Err(SimplicialError::WrongFaceCount {
                        level: n,
                        simplex: lvl.names[idx].clone(),
                        got: lvl.faces[idx].len(),
                        expected: n + 1,
                    });
                }
            }
        }
        // ∂_i ∂_j = ∂_{j-1} ∂_i for i < j
        for n in 2..=n_max {
            for idx in 0..self.size(n) {
                for j in 1..=n {
                    for i in 0..j {
                        let a = self.face(n - 1, self.face(n, idx, j), i);
                        let b = self.face(n - 1, self.face(n, idx, i), j - 1);
                        if a != b {
                            return Err(SimplicialError::IdentityViolation {
                                identity: format!("d{i} d{j} = d{} d{i}", j - 1),
                                witness: format!("level {n} simplex {:?}", self.name(n, idx)),
                            });
                        }
                    }
                }
            }
        }
        // face/degeneracy interchange
        for n in 0..n_max {
            for idx in 0..self.size(n) {
                for j in 0..=n {
                    let sx = self.degeneracy(n, idx, j);
                    for i in 0..=n + 1 {
                        let got = self.face(n + 1, sx, i);
                        let want = if i == j || i == j + 1 {
                            idx
                        } else if i < j {
                            self.degeneracy(n - 1, self.face(n, idx, i), j - 1)
                        } else {
                            self.degeneracy(n - 1, self.face(n, idx, i - 1), j)
                        };
                        if got != want {
                            return Err(SimplicialError::IdentityViolation {
                                identity: format!("d{i} s{j}"),
                                witness: format!("level {n} simplex {:?}", self.name(n, idx)),
                            });
                        }
                    }
                }
            }
        }
        // s_i s_j = s_{j+1} s_i for i <= j
        for n in 0..n_max.saturating_sub(1) {
            for idx in 0..self.size(n) {
                for j in 0..=n {
                    for i in 0..=j {
                        let a = self.degeneracy(n + 1, self.degeneracy(n, idx, j), i);
                        let b = self.degeneracy(n + 1, self.degeneracy(n, idx, i), j + 1);
                        if a != b {
                            return Err(SimplicialError::IdentityViolation {
                                identity: format!("s{i} s{j} = s{} s{i}", j + 1),
                                witness: format!("level {n} simplex {:?}", self.name(n, idx)),
                            });
                        }
                    }
                }
            }
        }
        // decompositions reproduce the simplex through the degeneracy tables
        for n in 0..=n_max {
            for idx in 0..self.size(n) {
                let (w, blvl, b) = self.decompose(n, idx);
                let mut cur = b;
                let mut lvl = blvl;
                for &j in w.iter().rev() {
                    cur = self.degeneracy(lvl, cur, j);
                    lvl += 1;
                }
                if cur != idx {
                    return Err(SimplicialError::DecompositionViolation {
                        witness: format!("level {n} simplex {:?}", self.name(n, idx)),
                    });
                }
                if w.is_empty() && n > 0 {
                    // really nondegenerate?
                    for i in 0..n {
                        let y = self.face(n, idx, i + 1);
                        if self.degeneracy(n - 1, y, i) == idx {
                            return Err(SimplicialError::DecompositionViolation {
                                witness: format!(
                                    "level {n} simplex {:?} marked nondegenerate but equals s{i} of a face",
                                    self.name(n, idx)
                                ),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// X(f) for a monotone map f: [m] -> [n] given by its value list, applied
    /// to a level-n simplex. Returns the level-m image.
    pub fn apply_monotone(&self, f: &[usize], n: usize, idx: usize) -> usize {
        assert!(!f.is_empty());
        let m = f.len() - 1;
        assert!(f.windows(2).all(|w| w[0] <= w[1]) && *f.last().unwrap() <= n);
        // identity?
        if m == n && f.iter().enumerate().all(|(k, &v)| k == v) {
            return idx;
        }
        // peel a missed value (largest) as a face
        if let Some(miss) = (0..=n).rev().find(|v| !f.contains(v)) {
            let reduced: Vec<usize> = f.iter().map(|&v| if v > miss { v - 1 } else { v }).collect();
            return self.apply_monotone(&reduced, n - 1, self.face(n, idx, miss));
        }
        // surjective, m > n: peel the smallest duplicated argument as s_j
        let j = (0..m).find(|&k| f[k] == f[k + 1]).expect("non-injective");
        let mut reduced = f.to_vec();
        reduced.remove(j);
        let y = self.apply_monotone(&reduced, n, idx);
        self.degeneracy(m - 1, y, j)
    }

    /// Standard m-simplex truncated at n_max; simplices are named by their
    /// vertex sequences, e.g. "02" for the edge 0 -> 2.
    pub fn standard_simplex(m: usize, n_max: usize) -> Self {
        let mut input: Vec<Vec<NondegSpec>> = vec![];
        for n in 0..=n_max {
            let mut specs = vec![];
            if n <= m {
                for seq in increasing_sequences(m, n + 1) {
                    let name = seq_name(&seq);
                    let faces = if n == 0 {
                        vec![]
                    } else {
                        (0..=n)
                            .map(|i| {
                                let mut s = seq.clone();
                                s.remove(i);
                                seq_name(&s)
                            })
                            .collect()
                    };
                    specs.push(NondegSpec { name, faces });
                }
            }
            input.push(specs);
        }
        let out = Self::from_nondegenerate(&input, DEFAULT_LEVEL_LIMIT).unwrap();
        debug_assert!(out.validate().is_ok());
        out
    }

    /// Levelwise product, faces and degeneracies componentwise. Index of
    /// (x, y) at level n is x * |Y_n| + y.
    pub fn product(
        x: &TruncatedSimplicialSet,
        y: &TruncatedSimplicialSet,
        level_limit: usize,
    ) -> Result<Self, SimplicialError> {
        assert_eq!(x.n_max(), y.n_max());
        let n_max = x.n_max();
        let mut names = vec![];
        let mut faces = vec![];
        let mut degs = vec![];
        for n in 0..=n_max {
            let (sx, sy) = (x.size(n), y.size(n));
            if sx * sy > level_limit {
                return Err(SimplicialError::LevelTooLarge { level: n, size: sx * sy, max: level_limit });
            }
            let mut lnames = Vec::with_capacity(sx * sy);
            let mut lfaces = Vec::with_capacity(sx * sy);
            let mut ldegs = Vec::with_capacity(sx * sy);
            for a in 0..sx {
                for b in 0..sy {
                    lnames.push(format!("({},{})", x.name(n, a), y.name(n, b)));
                    if n > 0 {
                        let fy = y.size(n - 1);
                        lfaces.push(
                            (0..=n).map(|i| x.face(n, a, i) * fy + y.face(n, b, i)).collect(),
                        );
                    } else {
                        lfaces.push(vec![]);
                    }
                    if n < n_max {
                        let dy = y.size(n + 1);
                        ldegs.push(
                            (0..=n)
                                .map(|i| x.degeneracy(n, a, i) * dy + y.degeneracy(n, b, i))
                                .collect(),
                        );
                    }
                }
            }
            names.push(lnames);
            faces.push(lfaces);
            degs.push(ldegs);
        }
        Ok(Self::from_tables(names, faces, degs))
    }
}

/// Face i of the degenerate simplex with canonical word `word` (nonempty) over
/// nondegenerate base `base`, living at level `n`. Needs face tables below n
/// and degeneracy tables up to level n-2, which the builder has.
fn degenerate_face(
    levels: &[SimplicialLevel],
    lookup: &[HashMap<(Vec<usize>, usize), usize>],
    n: usize,
    i: usize,
    word: &[usize],
    base: usize,
) -> usize {
    let j = word[0];
    let rest = &word[1..];
    let resolve = |w: &[usize], lvl: usize| -> usize {
        if w.is_empty() {
            base
        } else {
            *lookup[lvl].get(&(w.to_vec(), base)).expect("inner degeneracies already built")
        }
    };
    if i == j || i == j + 1 {
        return resolve(rest, n - 1);
    }
    let (inner_i, s_index) = if i < j { (i, j - 1) } else { (i - 1, j) };
    let f = if rest.is_empty() {
        levels[n - 1].faces[base][inner_i]
    } else {
        degenerate_face(levels, lookup, n - 1, inner_i, rest, base)
    };
    levels[n - 2].degeneracies[f][s_index]
}

fn increasing_sequences(max: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur = vec![];
    fn rec(max: usize, len: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in start..=max {
            cur.push(v);
            rec(max, len, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(max, len, 0, &mut cur, &mut out);
    out
}

fn seq_name(seq: &[usize]) -> String {
    seq.iter().map(|v| v.to_string()).collect()
}

/// A simplicial map between two truncated sets of the same height:
/// `levels[n][src]` is the image index at level n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    pub levels: Vec<Vec<usize>>,
}

impl SimplicialMap {
    pub fn identity(x: &TruncatedSimplicialSet) -> Self {
        SimplicialMap { levels: (0..=x.n_max()).map(|n| (0..x.size(n)).collect()).collect() }
    }

    pub fn apply(&self, n: usize, idx: usize) -> usize {
        self.levels[n][idx]
    }

    /// Build from images of the nondegenerate simplices (by index); extended
    /// to degenerate ones through the target's degeneracy tables.
    pub fn from_nondegenerate_images(
        src: &TruncatedSimplicialSet,
        tgt: &TruncatedSimplicialSet,
        images: &[HashMap<usize, usize>],
    ) -> Self {
        let mut levels = vec![];
        for n in 0..=src.n_max() {
            let mut lvl = Vec::with_capacity(src.size(n));
            for idx in 0..src.size(n) {
                let (w, blvl, b) = src.decompose(n, idx);
                let mut cur = images[blvl][&b];
                let mut l = blvl;
                for &j in w.iter().rev() {
                    cur = tgt.degeneracy(l, cur, j);
                    l += 1;
                }
                lvl.push(cur);
            }
            levels.push(lvl);
        }
        SimplicialMap { levels }
    }

    /// Commutes with all faces and degeneracies.
    pub fn validate(
        &self,
        src: &TruncatedSimplicialSet,
        tgt: &TruncatedSimplicialSet,
    ) -> Result<(), SimplicialError> {
        assert_eq!(self.levels.len(), src.levels.len());
        for n in 0..=src.n_max() {
            assert_eq!(self.levels[n].len(), src.size(n));
            for idx in 0..src.size(n) {
                let img = self.apply(n, idx);
                assert!(img < tgt.size(n), "image out of range");
                if n > 0 {
                    for i in 0..=n {
                        if tgt.face(n, img, i) != self.apply(n - 1, src.face(n, idx, i)) {
                            return Err(SimplicialError::IdentityViolation {
                                identity: format!("f d{i} = d{i} f"),
                                witness: format!("level {n} simplex {:?}", src.name(n, idx)),
                            });
                        }
                    }
                }
                if n < src.n_max() {
                    for i in 0..=n {
                        if tgt.degeneracy(n, img, i) != self.apply(n + 1, src.degeneracy(n, idx, i)) {
                            return Err(SimplicialError::IdentityViolation {
                                identity: format!("f s{i} = s{i} f"),
                                witness: format!("level {n} simplex {:?}", src.name(n, idx)),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// second ∘ first.
    pub fn compose(second: &SimplicialMap, first: &SimplicialMap) -> SimplicialMap {
        SimplicialMap {
            levels: first
                .levels
                .iter()
                .enumerate()
                .map(|(n, lvl)| lvl.iter().map(|&i| second.levels[n][i]).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(n_max: usize) -> TruncatedSimplicialSet {
        // one vertex, one edge glued at both ends
        let mut input = vec![
            vec![NondegSpec { name: "v".into(), faces: vec![] }],
            vec![NondegSpec { name: "e".into(), faces: vec!["v".into(), "v".into()] }],
        ];
        input.resize(n_max + 1, vec![]);
        TruncatedSimplicialSet::from_nondegenerate(&input, DEFAULT_LEVEL_LIMIT).unwrap()
    }

    #[test]
    fn circle_level_counts() {
        let c = circle(3);
        assert_eq!(c.size(0), 1);
        assert_eq!(c.size(1), 2); // s0(v), e
        assert_eq!(c.size(2), 3); // s1s0(v), s0(e), s1(e)
        assert_eq!(c.size(3), 4);
        c.validate().unwrap();
        assert_eq!(c.nondegenerate(1).len(), 1);
        assert!(c.nondegenerate(2).is_empty());
        let s0e = c.index_of(1, "s0(v)").unwrap();
        assert_eq!(c.name(1, s0e), "s0(v)");
        assert_eq!(c.index_of(2, "s1s0(v)").map(|i| c.nondeg_dimension(2, i)), Some(0));
    }

    #[test]
    fn insert_degeneracy_normalizes() {
        assert_eq!(insert_degeneracy(0, &[1, 0]), vec![2, 1, 0]);
        assert_eq!(insert_degeneracy(1, &[2, 0]), vec![3, 1, 0]);
        assert_eq!(insert_degeneracy(0, &[1]), vec![2, 0]);
        assert_eq!(insert_degeneracy(2, &[1]), vec![2, 1]);
    }

    #[test]
    fn standard_simplex_counts() {
        let d2 = TruncatedSimplicialSet::standard_simplex(2, 2);
        assert_eq!(d2.size(0), 3);
        assert_eq!(d2.size(1), 6);
        assert_eq!(d2.size(2), 10); // nondecreasing length-3 sequences in {0,1,2}
        assert_eq!(d2.nondegenerate(2).len(), 1);
        d2.validate().unwrap();
    }

    #[test]
    fn detects_broken_faces() {
        // triangle with mismatched edges: d0(d1 t) must equal d0(d0 t)
        let input = vec![
            vec![
                NondegSpec { name: "v".into(), faces: vec![] },
                NondegSpec { name: "w".into(), faces: vec![] },
            ],
            vec![NondegSpec { name: "e".into(), faces: vec!["w".into(), "v".into()] }],
            vec![NondegSpec {
                name: "t".into(),
                faces: vec!["e".into(), "s0(v)".into(), "e".into()],
            }],
        ];
        let set = TruncatedSimplicialSet::from_nondegenerate(&input, DEFAULT_LEVEL_LIMIT).unwrap();
        match set.validate() {
            Err(SimplicialError::IdentityViolation { identity, witness }) => {
                assert!(identity.starts_with('d'), "face identity, got {identity}");
                assert!(witness.contains('t'));
            }
            other => panic!("expected an identity violation, got {other:?}"),
        }
    }

    #[test]
    fn unknown_face_name() {
        let input = vec![
            vec![NondegSpec { name: "v".into(), faces: vec![] }],
            vec![NondegSpec { name: "e".into(), faces: vec!["v".into(), "x".into()] }],
        ];
        assert!(matches!(
            TruncatedSimplicialSet::from_nondegenerate(&input, DEFAULT_LEVEL_LIMIT),
            Err(SimplicialError::UnknownFace { .. })
        ));
    }

    #[test]
    fn product_of_intervals() {
        let d1 = TruncatedSimplicialSet::standard_simplex(1, 2);
        let sq = TruncatedSimplicialSet::product(&d1, &d1, DEFAULT_LEVEL_LIMIT).unwrap();
        sq.validate().unwrap();
        assert_eq!(sq.size(0), 4);
        assert_eq!(sq.size(1), 9);
        // the square is two triangles
        assert_eq!(sq.nondegenerate(2).len(), 2);
        assert_eq!(sq.nondegenerate(1).len(), 5); // 4 sides + diagonal
    }

    #[test]
    fn monotone_application_on_standard_simplex() {
        let d2 = TruncatedSimplicialSet::standard_simplex(2, 3);
        d2.validate().unwrap();
        // the unique nondegenerate 2-simplex is "012"
        let top = d2.index_of(2, "012").unwrap();
        // f: [1] -> [2], 0,2  picks the edge 02
        let e = d2.apply_monotone(&[0, 2], 2, top);
        assert_eq!(d2.name(1, e), "02");
        // f: [3] -> [2], 0,1,1,2 is a degeneracy of the top simplex
        let deg = d2.apply_monotone(&[0, 1, 1, 2], 2, top);
        assert_eq!(d2.name(3, deg), "s1(012)");
        // contravariant functoriality on a sample pair
        let f = [0usize, 2]; // [1] -> [2]
        let g = [0usize, 0, 1]; // [2] -> [1]
        let fg: Vec<usize> = g.iter().map(|&k| f[k]).collect(); // f ∘ g : [2] -> [2]
        let via_comp = d2.apply_monotone(&fg, 2, top);
        let via_steps = d2.apply_monotone(&g, 1, d2.apply_monotone(&f, 2, top));
        assert_eq!(via_comp, via_steps);
    }

    #[test]
    fn simplicial_map_extension_and_validation() {
        let c = circle(2);
        // degree-one self map: identity on the nondegenerate simplices
        let mut images = vec![HashMap::new(), HashMap::new(), HashMap::new()];
        images[0].insert(0, 0);
        let e = c.index_of(1, "e").unwrap();
        images[1].insert(e, e);
        let m = SimplicialMap::from_nondegenerate_images(&c, &c, &images);
        assert_eq!(m, SimplicialMap::identity(&c));
        m.validate(&c, &c).unwrap();
        // collapse the edge onto the vertex: e -> s0(v)
        let mut collapse = vec![HashMap::new(), HashMap::new(), HashMap::new()];
        collapse[0].insert(0, 0);
        collapse[1].insert(e, c.index_of(1, "s0(v)").unwrap());
        let m2 = SimplicialMap::from_nondegenerate_images(&c, &c, &collapse);
        m2.validate(&c, &c).unwrap();
        assert_ne!(m2, SimplicialMap::identity(&c));
    }
}
