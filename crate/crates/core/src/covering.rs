//! Symbolic universal covers of one-vertex fixed-point complexes: a cover
//! simplex is a pair (word, simplex) with the word a loop at the unique
//! vertex. The cover is never materialized; the deck group may be infinite.

use crate::groupoid::PiWord;
use crate::gspace::GContext;
use crate::simplicial::TruncatedSimplicialSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoverError {
    #[error("the construction needs a single vertex, found {0}")]
    NotOneVertex(usize),
}

/// Require a unique vertex; returns its index.
pub fn one_vertex(set: &TruncatedSimplicialSet) -> Result<usize, CoverError> {
    if set.size(0) != 1 {
        return Err(CoverError::NotOneVertex(set.size(0)));
    }
    Ok(0)
}

/// A simplex (γ, x) of the universal cover of X^H: γ is an edge-path loop at
/// the unique vertex, x an ambient simplex index of X^H at level n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSimplex {
    pub h: usize,
    pub word: PiWord,
    pub n: usize,
    pub x: usize,
}

impl CoverSimplex {
    /// The canonical lift (empty word, x).
    pub fn representative(set: &TruncatedSimplicialSet, h: usize, n: usize, x: usize) -> Self {
        let v = set.apply_monotone(&[0], n, x);
        CoverSimplex { h, word: PiWord::identity(v), n, x }
    }

    pub fn reduced(&self, set: &TruncatedSimplicialSet) -> CoverSimplex {
        CoverSimplex { h: self.h, word: self.word.reduce(set), n: self.n, x: self.x }
    }
}

/// Loop class twisting the 0th face: the 0-1 edge of the simplex. At a
/// single vertex every edge is a loop.
pub fn twisting_word(set: &TruncatedSimplicialSet, n: usize, x: usize) -> PiWord {
    PiWord::leading_edge(set, n, x)
}

/// Face i of a cover simplex; the 0th face picks up the twisting word on the
/// left of γ (i.e. γ is traversed first).
pub fn cover_face(set: &TruncatedSimplicialSet, i: usize, cs: &CoverSimplex) -> CoverSimplex {
    assert!(cs.n >= 1 && i <= cs.n);
    if i == 0 {
        let twist = twisting_word(set, cs.n, cs.x);
        CoverSimplex {
            h: cs.h,
            word: cs.word.then(&twist),
            n: cs.n - 1,
            x: set.face(cs.n, cs.x, 0),
        }
    } else {
        CoverSimplex { h: cs.h, word: cs.word.clone(), n: cs.n - 1, x: set.face(cs.n, cs.x, i) }
    }
}

pub fn cover_degeneracy(set: &TruncatedSimplicialSet, i: usize, cs: &CoverSimplex) -> CoverSimplex {
    CoverSimplex { h: cs.h, word: cs.word.clone(), n: cs.n + 1, x: set.degeneracy(cs.n, cs.x, i) }
}

/// Deck transformation by a loop σ: (γ, x) -> (γ·σ^{-1}, x), with σ^{-1}
/// traversed before γ.
pub fn cover_action(cs: &CoverSimplex, sigma: &PiWord) -> CoverSimplex {
    assert_eq!(sigma.src, sigma.tgt, "deck transformations come from loops");
    CoverSimplex { h: cs.h, word: sigma.inverse().then(&cs.word), n: cs.n, x: cs.x }
}

/// The path class attached to a cover vertex.
pub fn xi(cs: &CoverSimplex) -> PiWord {
    assert_eq!(cs.n, 0);
    cs.word.clone()
}

/// The map of covers induced by an orbit-category morphism with
/// representative g: letterwise translation on the word, action on the
/// simplex. Projecting recovers the action on X.
pub fn cover_map(ctx: &GContext, to_subgroup: usize, g: usize, cs: &CoverSimplex) -> CoverSimplex {
    CoverSimplex {
        h: to_subgroup,
        word: cs.word.translate(&ctx.gs, g),
        n: cs.n,
        x: ctx.gs.act(g, cs.n, cs.x),
    }
}
