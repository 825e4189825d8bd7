//! Edge-path words and the equivariant fundamental groupoid: morphisms pair
//! an orbit-category map with an edge path in the appropriate fixed-point
//! subcomplex. Words are compared up to free reduction (degenerate edges act
//! as identities and adjacent inverse letters cancel).

use crate::gspace::GSimplicialSet;
use crate::orbit::{OrbitCategory, OrbitMor};
use crate::simplicial::TruncatedSimplicialSet;

/// An edge path: letters traverse level-1 simplices, forward from face 1 to
/// face 0. Vertices and edges are ambient indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiWord {
    pub src: usize,
    pub tgt: usize,
    pub letters: Vec<(usize, bool)>,
}

impl PiWord {
    pub fn identity(v: usize) -> Self {
        PiWord { src: v, tgt: v, letters: vec![] }
    }

    pub fn from_edge(set: &TruncatedSimplicialSet, e: usize) -> Self {
        PiWord { src: set.face(1, e, 1), tgt: set.face(1, e, 0), letters: vec![(e, true)] }
    }

    /// The 0-1 edge of an n-simplex, as a one-letter word (n >= 1).
    pub fn leading_edge(set: &TruncatedSimplicialSet, n: usize, idx: usize) -> Self {
        Self::from_edge(set, set.apply_monotone(&[0, 1], n, idx))
    }

    /// first, then second.
    pub fn then(&self, second: &PiWord) -> PiWord {
        assert_eq!(self.tgt, second.src, "paths not composable");
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&second.letters);
        PiWord { src: self.src, tgt: second.tgt, letters }
    }

    pub fn inverse(&self) -> PiWord {
        PiWord {
            src: self.tgt,
            tgt: self.src,
            letters: self.letters.iter().rev().map(|&(e, d)| (e, !d)).collect(),
        }
    }

    /// Drop degenerate letters and cancel adjacent inverse pairs.
    pub fn reduce(&self, set: &TruncatedSimplicialSet) -> PiWord {
        let mut out: Vec<(usize, bool)> = vec![];
        for &(e, d) in &self.letters {
            if !set.is_nondegenerate(1, e) {
                continue;
            }
            if let Some(&(pe, pd)) = out.last() {
                if pe == e && pd != d {
                    out.pop();
                    continue;
                }
            }
            out.push((e, d));
        }
        PiWord { src: self.src, tgt: self.tgt, letters: out }
    }

    pub fn reduced_eq(&self, other: &PiWord, set: &TruncatedSimplicialSet) -> bool {
        self.reduce(set) == other.reduce(set)
    }

    pub fn validate(&self, set: &TruncatedSimplicialSet) -> bool {
        let mut at = self.src;
        for &(e, d) in &self.letters {
            let (from, to) = (set.face(1, e, 1), set.face(1, e, 0));
            let (from, to) = if d { (from, to) } else { (to, from) };
            if at != from {
                return false;
            }
            at = to;
        }
        at == self.tgt
    }

    /// Letterwise translation by a group element.
    pub fn translate(&self, gs: &GSimplicialSet, g: usize) -> PiWord {
        PiWord {
            src: gs.act(g, 0, self.src),
            tgt: gs.act(g, 0, self.tgt),
            letters: self.letters.iter().map(|&(e, d)| (gs.act(g, 1, e), d)).collect(),
        }
    }

    /// Every vertex and edge on the path is fixed by all of `h`.
    pub fn lies_in_fixed(&self, gs: &GSimplicialSet, h: &[usize]) -> bool {
        h.iter().all(|&g| {
            gs.act(g, 0, self.src) == self.src
                && self.letters.iter().all(|&(e, _)| gs.act(g, 1, e) == e)
        })
    }
}

/// A morphism of the equivariant fundamental groupoid, from (H, x) to (K, y):
/// an orbit-category morphism g: G/H -> G/K together with an edge path in X^H
/// from x to g·y.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiMor {
    pub gmor: OrbitMor,
    pub word: PiWord,
}

impl PiMor {
    /// Induced by a path within one fixed-point complex: (H, src) -> (H, tgt).
    pub fn from_path(cat: &OrbitCategory, h: usize, word: PiWord) -> Self {
        PiMor { gmor: cat.identity(h), word }
    }

    /// Pure orbit-map morphism (H, g·y) -> (K, y): empty word at g·y.
    pub fn structural(gs: &GSimplicialSet, gmor: OrbitMor, y: usize) -> Self {
        let gy = gs.act(gmor.rep, 0, y);
        PiMor { gmor, word: PiWord::identity(gy) }
    }

    pub fn source_vertex(&self) -> usize {
        self.word.src
    }

    /// second ∘ first: first (H,x) -> (K,y), then second (K,y) -> (L,z).
    pub fn compose(cat: &OrbitCategory, gs: &GSimplicialSet, second: &PiMor, first: &PiMor) -> PiMor {
        let gmor = cat.compose(&second.gmor, &first.gmor);
        let translated = second.word.translate(gs, first.gmor.rep);
        PiMor { gmor, word: first.word.then(&translated) }
    }

    pub fn reduced_eq(&self, other: &PiMor, set: &TruncatedSimplicialSet) -> bool {
        self.gmor == other.gmor && self.word.reduced_eq(&other.word, set)
    }
}

/// The twisting morphism attached to an n-simplex x of X^H (n >= 1): the path
/// along the 0-1 edge of x, within the same fixed-point complex. Indices are
/// ambient.
pub fn sigma_star(cat: &OrbitCategory, set: &TruncatedSimplicialSet, h: usize, n: usize, idx: usize) -> PiMor {
    PiMor::from_path(cat, h, PiWord::leading_edge(set, n, idx))
}

/// Finite presentation of the fundamental group of a connected simplicial
/// set at a base vertex: generators are the nondegenerate edges outside a
/// spanning tree, relations come from the nondegenerate 2-simplices.
#[derive(Clone, Debug)]
pub struct Pi1Presentation {
    /// edge index of each generator
    pub generators: Vec<usize>,
    /// words in the generators, letters (generator position, forward)
    pub relations: Vec<Vec<(usize, bool)>>,
}

pub fn pi1_presentation(set: &TruncatedSimplicialSet, base: usize) -> Pi1Presentation {
    assert!(set.n_max() >= 2, "need 2-simplices for the relations");
    let verts = set.size(0);
    // spanning tree by BFS over nondegenerate edges
    let mut visited = vec![false; verts];
    let mut tree_edges = vec![false; set.size(1)];
    visited[base] = true;
    let mut queue = std::collections::VecDeque::from([base]);
    while let Some(v) = queue.pop_front() {
        for e in set.nondegenerate(1) {
            let (a, b) = (set.face(1, e, 1), set.face(1, e, 0));
            let other = if a == v && !visited[b] {
                b
            } else if b == v && !visited[a] {
                a
            } else {
                continue;
            };
            visited[other] = true;
            tree_edges[e] = true;
            queue.push_back(other);
        }
    }
    assert!(visited.iter().all(|&v| v), "space must be connected");
    let generators: Vec<usize> = set
        .nondegenerate(1)
        .into_iter()
        .filter(|&e| !tree_edges[e])
        .collect();
    let gen_pos: std::collections::HashMap<usize, usize> =
        generators.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let letter = |e: usize, d: bool| -> Option<(usize, bool)> {
        gen_pos.get(&e).map(|&i| (i, d))
    };
    let mut relations = vec![];
    for x in set.nondegenerate(2) {
        // the 1-edge is homotopic to the 2-edge followed by the 0-edge
        let mut rel: Vec<(usize, bool)> = vec![];
        for (e, d) in [
            (set.face(2, x, 2), true),
            (set.face(2, x, 0), true),
            (set.face(2, x, 1), false),
        ] {
            if set.is_nondegenerate(1, e) {
                if let Some(l) = letter(e, d) {
                    rel.push(l);
                }
            }
        }
        // free reduction
        let mut reduced: Vec<(usize, bool)> = vec![];
        for l in rel {
            if let Some(&(pe, pd)) = reduced.last() {
                if pe == l.0 && pd != l.1 {
                    reduced.pop();
                    continue;
                }
            }
            reduced.push(l);
        }
        if !reduced.is_empty() {
            relations.push(reduced);
        }
    }
    Pi1Presentation { generators, relations }
}

impl Pi1Presentation {
    /// Abelianization as (rank, elementary divisors), via the relation matrix.
    pub fn abelianization(&self) -> crate::linalg::GroupShape {
        use crate::linalg::{IntRing, LinAlg, Mat, Ring};
        let rows = self.generators.len();
        let cols = self.relations.len();
        let mut m = Mat::zero(IntRing, rows, cols);
        for (j, rel) in self.relations.iter().enumerate() {
            for &(g, d) in rel {
                let delta = IntRing.from_i64(if d { 1 } else { -1 });
                let cur = m.at(g, j).clone();
                m.set(g, j, IntRing.add(&cur, &delta));
            }
        }
        IntRing.quotient_shape(rows, &m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::simplicial::{NondegSpec, DEFAULT_LEVEL_LIMIT};
    use std::collections::HashMap;

    fn circle(n_max: usize) -> TruncatedSimplicialSet {
        let mut input = vec![
            vec![NondegSpec { name: "v".into(), faces: vec![] }],
            vec![NondegSpec { name: "e".into(), faces: vec!["v".into(), "v".into()] }],
        ];
        input.resize(n_max + 1, vec![]);
        TruncatedSimplicialSet::from_nondegenerate(&input, DEFAULT_LEVEL_LIMIT).unwrap()
    }

    fn torus() -> TruncatedSimplicialSet {
        // one vertex, loops a, b, c and two triangles realizing c ~ a·b
        let input = vec![
            vec![NondegSpec { name: "v".into(), faces: vec![] }],
            vec![
                NondegSpec { name: "a".into(), faces: vec!["v".into(), "v".into()] },
                NondegSpec { name: "b".into(), faces: vec!["v".into(), "v".into()] },
                NondegSpec { name: "c".into(), faces: vec!["v".into(), "v".into()] },
            ],
            vec![
                NondegSpec { name: "U".into(), faces: vec!["b".into(), "c".into(), "a".into()] },
                NondegSpec { name: "L".into(), faces: vec!["a".into(), "c".into(), "b".into()] },
            ],
        ];
        let set = TruncatedSimplicialSet::from_nondegenerate(&input, DEFAULT_LEVEL_LIMIT).unwrap();
        set.validate().unwrap();
        set
    }

    #[test]
    fn words_reduce_and_validate() {
        let c = circle(2);
        let e = c.index_of(1, "e").unwrap();
        let w = PiWord::from_edge(&c, e);
        assert!(w.validate(&c));
        let back_and_forth = w.then(&w.inverse());
        assert!(back_and_forth.validate(&c));
        assert!(back_and_forth.reduce(&c).letters.is_empty());
        // degenerate letters vanish
        let s0v = c.index_of(1, "s0(v)").unwrap();
        let lazy = PiWord::from_edge(&c, s0v);
        assert!(lazy.reduce(&c).letters.is_empty());
        assert!(lazy.reduced_eq(&PiWord::identity(0), &c));
    }

    #[test]
    fn leading_edge_of_triangle() {
        let t = torus();
        let u = t.index_of(2, "U").unwrap();
        // the 0-1 edge of U is its face 2
        let lead = PiWord::leading_edge(&t, 2, u);
        assert_eq!(lead.letters, vec![(t.index_of(1, "a").unwrap(), true)]);
    }

    #[test]
    fn circle_pi1_is_free_on_one_generator() {
        let p = pi1_presentation(&circle(2), 0);
        assert_eq!(p.generators.len(), 1);
        assert!(p.relations.is_empty());
        assert_eq!(p.abelianization().render(), "Z");
    }

    #[test]
    fn torus_pi1_abelianization() {
        let p = pi1_presentation(&torus(), 0);
        assert_eq!(p.generators.len(), 3);
        assert_eq!(p.relations.len(), 2);
        assert_eq!(p.abelianization().render(), "Z^2");
    }

    #[test]
    fn groupoid_composition_translates_words() {
        // Z/2 swapping two vertices joined by two edges
        let mut input = vec![
            vec![
                NondegSpec { name: "x".into(), faces: vec![] },
                NondegSpec { name: "y".into(), faces: vec![] },
            ],
            vec![
                NondegSpec { name: "p".into(), faces: vec!["y".into(), "x".into()] },
                NondegSpec { name: "q".into(), faces: vec!["x".into(), "y".into()] },
            ],
        ];
        input.resize(3, vec![]);
        let set = TruncatedSimplicialSet::from_nondegenerate(&input, DEFAULT_LEVEL_LIMIT).unwrap();
        let g2 = FiniteGroup::cyclic(2);
        let (vx, vy) = (set.index_of(0, "x").unwrap(), set.index_of(0, "y").unwrap());
        let (ep, eq) = (set.index_of(1, "p").unwrap(), set.index_of(1, "q").unwrap());
        let mut swap: Vec<HashMap<usize, usize>> = vec![HashMap::new(); 3];
        swap[0].insert(vx, vy);
        swap[0].insert(vy, vx);
        swap[1].insert(ep, eq);
        swap[1].insert(eq, ep);
        let mut id: Vec<HashMap<usize, usize>> = vec![HashMap::new(); 3];
        id[0].insert(vx, vx);
        id[0].insert(vy, vy);
        id[1].insert(ep, ep);
        id[1].insert(eq, eq);
        let gs = GSimplicialSet::from_nondegenerate_action(g2, set, &[id, swap]).unwrap();
        let cat = OrbitCategory::new(gs.group.clone());
        let e_idx = cat.subgroup_index(&[0]).unwrap();
        // free-orbit translation by the swap: (e, g·y) -> (e, y)
        let gmor = cat.morphism(e_idx, e_idx, 1).unwrap();
        let x = gs.space.index_of(0, "x").unwrap();
        let m1 = PiMor::structural(&gs, gmor, x); // (e, y) -> (e, x)
        let p = gs.space.index_of(1, "p").unwrap();
        let path = PiMor::from_path(&cat, e_idx, PiWord::from_edge(&gs.space, p)); // x -> y
        // path: (e,x) -> (e,y), then m1: (e,y) -> (e,x)
        let comp = PiMor::compose(&cat, &gs, &m1, &path);
        assert_eq!(comp.gmor, gmor);
        assert_eq!(comp.word.src, x);
        // word is the p-letter followed by the translated empty word
        assert_eq!(comp.word.letters, vec![(p, true)]);
        assert!(comp.word.validate(&gs.space));
    }
}
