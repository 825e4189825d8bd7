//! Local coefficient systems on the equivariant fundamental groupoid: a
//! module (here: free module rank) for every pair (subgroup H, vertex of
//! X^H), invertible matrices for edges within a fixed-point complex and for
//! orbit-category morphisms, subject to the triangle, naturality and
//! functoriality relations.

use crate::groupoid::{PiMor, PiWord};
use crate::gspace::GContext;
use crate::linalg::{LinAlg, Mat, PrimeField, Ring};
use crate::orbit::OrbitMor;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoefficientError {
    #[error("no module rank for subgroup {subgroup} at vertex {vertex:?}")]
    MissingRank { subgroup: usize, vertex: String },
    #[error("no edge matrix for subgroup {subgroup} at edge {edge:?}")]
    MissingEdge { subgroup: usize, edge: String },
    #[error("no matrix for orbit morphism {from}->{to} (rep {rep}) at vertex {vertex:?}")]
    MissingOrbit { from: usize, to: usize, rep: usize, vertex: String },
    #[error("matrix at {at} has shape {got_rows}x{got_cols}, expected {rows}x{cols}")]
    BadShape { at: String, got_rows: usize, got_cols: usize, rows: usize, cols: usize },
    #[error("matrix at {at} is not invertible")]
    NotInvertible { at: String },
    #[error("triangle relation fails for subgroup {subgroup} at 2-simplex {simplex:?}")]
    Triangle { subgroup: usize, simplex: String },
    #[error("naturality fails for orbit morphism {from}->{to} (rep {rep}) at edge {edge:?}")]
    Naturality { from: usize, to: usize, rep: usize, edge: String },
    #[error("functoriality fails composing {0}->{1} after {1}->{2} at vertex {vertex:?}", vertex = .3)]
    Functoriality(usize, usize, usize, String),
}

#[derive(Clone, Debug)]
pub struct LocalSystem<R: LinAlg> {
    pub ring: R,
    /// ranks[h]: ambient fixed vertex -> module rank
    pub ranks: Vec<HashMap<usize, usize>>,
    /// edge_mats[h]: ambient nondegenerate edge of X^H -> matrix of shape
    /// rank(src) x rank(tgt); degenerate edges are implicitly the identity
    pub edge_mats: Vec<HashMap<usize, Mat<R>>>,
    /// (from, to, rep) -> vertex y of X^to -> matrix of shape
    /// rank(from, g·y) x rank(to, y); identity morphisms are implicit
    pub orbit_mats: HashMap<(usize, usize, usize), HashMap<usize, Mat<R>>>,
}

impl<R: LinAlg> LocalSystem<R> {
    /// Constant system: rank r everywhere, all matrices the identity.
    pub fn constant(ctx: &GContext, ring: R, r: usize) -> Self {
        let nsub = ctx.cat.subgroups.len();
        let mut ranks = vec![HashMap::new(); nsub];
        let mut edge_mats = vec![HashMap::new(); nsub];
        for h in 0..nsub {
            for &v in ctx.fixed_vertices(h) {
                ranks[h].insert(v, r);
            }
            for e in ctx.fixed_nondegenerate(h, 1) {
                edge_mats[h].insert(e, Mat::identity(ring.clone(), r));
            }
        }
        let mut orbit_mats = HashMap::new();
        for m in ctx.cat.all_non_identity_morphisms() {
            let mut per_vertex = HashMap::new();
            for &y in ctx.fixed_vertices(m.to) {
                per_vertex.insert(y, Mat::identity(ring.clone(), r));
            }
            orbit_mats.insert((m.from, m.to, m.rep), per_vertex);
        }
        LocalSystem { ring, ranks, edge_mats, orbit_mats }
    }

    pub fn rank(&self, h: usize, v: usize) -> usize {
        self.ranks[h][&v]
    }

    /// Matrix of a single edge letter within X^H; degenerate edges give the
    /// identity, reversed letters the inverse.
    pub fn letter_matrix(&self, ctx: &GContext, h: usize, e: usize, forward: bool) -> Mat<R> {
        let set = &ctx.gs.space;
        if !set.is_nondegenerate(1, e) {
            let v = set.face(1, e, 1);
            return Mat::identity(self.ring.clone(), self.rank(h, v));
        }
        let m = &self.edge_mats[h][&e];
        if forward {
            m.clone()
        } else {
            self.ring.inverse(m).expect("edge matrices are invertible")
        }
    }

    /// Matrix of an edge path within X^H (first letter leftmost).
    pub fn word_matrix(&self, ctx: &GContext, h: usize, w: &PiWord) -> Mat<R> {
        let mut acc = Mat::identity(self.ring.clone(), self.rank(h, w.src));
        for &(e, d) in &w.letters {
            acc = acc.matmul(&self.letter_matrix(ctx, h, e, d));
        }
        acc
    }

    /// Matrix of an orbit morphism at a vertex y of X^to.
    pub fn orbit_matrix(&self, ctx: &GContext, m: &OrbitMor, y: usize) -> Mat<R> {
        if ctx.cat.is_identity(m) {
            return Mat::identity(self.ring.clone(), self.rank(m.to, y));
        }
        self.orbit_mats[&(m.from, m.to, m.rep)][&y].clone()
    }

    /// Value of the (contravariant) system on a groupoid morphism
    /// (H, x) -> (K, y): a matrix rank(H, x) x rank(K, y).
    pub fn evaluate(&self, ctx: &GContext, m: &PiMor) -> Mat<R> {
        let g_inv = ctx.gs.group.inv(m.gmor.rep);
        let y = ctx.gs.act(g_inv, 0, m.word.tgt);
        let tau = self.orbit_matrix(ctx, &m.gmor, y);
        self.word_matrix(ctx, m.gmor.from, &m.word).matmul(&tau)
    }

    /// Action of a loop at (H, v) on the module there: inverse of the path
    /// matrix, so that it is a left group action.
    pub fn pi_action(&self, ctx: &GContext, h: usize, w: &PiWord) -> Mat<R> {
        assert_eq!(w.src, w.tgt, "need a loop");
        let m = self.word_matrix(ctx, h, w);
        self.ring.inverse(&m).expect("loop matrices are invertible")
    }

    /// All of the defining relations, with a witness on failure.
    pub fn check_well_defined(&self, ctx: &GContext) -> Result<(), CoefficientError> {
        let set = &ctx.gs.space;
        let nsub = ctx.cat.subgroups.len();
        // presence and shapes
        for h in 0..nsub {
            for &v in ctx.fixed_vertices(h) {
                if !self.ranks[h].contains_key(&v) {
                    return Err(CoefficientError::MissingRank {
                        subgroup: h,
                        vertex: set.name(0, v).to_string(),
                    });
                }
            }
            for e in ctx.fixed_nondegenerate(h, 1) {
                let Some(m) = self.edge_mats[h].get(&e) else {
                    return Err(CoefficientError::MissingEdge {
                        subgroup: h,
                        edge: set.name(1, e).to_string(),
                    });
                };
                let (rows, cols) = (self.rank(h, set.face(1, e, 1)), self.rank(h, set.face(1, e, 0)));
                if m.rows != rows || m.cols != cols {
                    return Err(CoefficientError::BadShape {
                        at: format!("edge {:?} / subgroup {h}", set.name(1, e)),
                        got_rows: m.rows,
                        got_cols: m.cols,
                        rows,
                        cols,
                    });
                }
                if self.ring.inverse(m).is_none() {
                    return Err(CoefficientError::NotInvertible {
                        at: format!("edge {:?} / subgroup {h}", set.name(1, e)),
                    });
                }
            }
        }
        for om in ctx.cat.all_non_identity_morphisms() {
            let per_vertex = self.orbit_mats.get(&(om.from, om.to, om.rep));
            for &y in ctx.fixed_vertices(om.to) {
                let Some(m) = per_vertex.and_then(|pv| pv.get(&y)) else {
                    return Err(CoefficientError::MissingOrbit {
                        from: om.from,
                        to: om.to,
                        rep: om.rep,
                        vertex: set.name(0, y).to_string(),
                    });
                };
                let gy = ctx.gs.act(om.rep, 0, y);
                let (rows, cols) = (self.rank(om.from, gy), self.rank(om.to, y));
                if m.rows != rows || m.cols != cols {
                    return Err(CoefficientError::BadShape {
                        at: format!("orbit {}->{} rep {} at {:?}", om.from, om.to, om.rep, set.name(0, y)),
                        got_rows: m.rows,
                        got_cols: m.cols,
                        rows,
                        cols,
                    });
                }
                if self.ring.inverse(m).is_none() {
                    return Err(CoefficientError::NotInvertible {
                        at: format!("orbit {}->{} rep {} at {:?}", om.from, om.to, om.rep, set.name(0, y)),
                    });
                }
            }
        }
        // triangle relation in each fixed-point complex
        for h in 0..nsub {
            for x in ctx.fixed_nondegenerate(h, 2) {
                let e01 = set.face(2, x, 2);
                let e12 = set.face(2, x, 0);
                let e02 = set.face(2, x, 1);
                let lhs = self.letter_matrix(ctx, h, e02, true);
                let rhs = self
                    .letter_matrix(ctx, h, e01, true)
                    .matmul(&self.letter_matrix(ctx, h, e12, true));
                if lhs != rhs {
                    return Err(CoefficientError::Triangle {
                        subgroup: h,
                        simplex: set.name(2, x).to_string(),
                    });
                }
            }
        }
        // naturality against edges of the target fixed-point complex
        for om in ctx.cat.all_non_identity_morphisms() {
            for e in ctx.fixed_nondegenerate(om.to, 1) {
                let y1 = set.face(1, e, 1);
                let y0 = set.face(1, e, 0);
                let ge = ctx.gs.act(om.rep, 1, e);
                let lhs = self.orbit_matrix(ctx, &om, y1).matmul(&self.letter_matrix(ctx, om.to, e, true));
                let rhs = self
                    .letter_matrix(ctx, om.from, ge, true)
                    .matmul(&self.orbit_matrix(ctx, &om, y0));
                if lhs != rhs {
                    return Err(CoefficientError::Naturality {
                        from: om.from,
                        to: om.to,
                        rep: om.rep,
                        edge: set.name(1, e).to_string(),
                    });
                }
            }
        }
        // functoriality over composable pairs (identities included, they are
        // implicit identities and hold trivially)
        for m1 in ctx.cat.all_non_identity_morphisms() {
            for m2 in ctx.cat.all_non_identity_morphisms() {
                if m1.to != m2.from {
                    continue;
                }
                let comp = ctx.cat.compose(&m2, &m1);
                for &z in ctx.fixed_vertices(m2.to) {
                    let g2z = ctx.gs.act(m2.rep, 0, z);
                    let lhs = self.orbit_matrix(ctx, &comp, z);
                    let rhs = self.orbit_matrix(ctx, &m1, g2z).matmul(&self.orbit_matrix(ctx, &m2, z));
                    if lhs != rhs {
                        return Err(CoefficientError::Functoriality(
                            m1.from,
                            m1.to,
                            m2.to,
                            set.name(0, z).to_string(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Relation variables for the sign sampler.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum SignVar {
    Edge(usize, usize),
    Orbit(usize, usize, usize, usize),
}

/// A random well-defined system: signs (+/-1 times identity) solving the
/// relation constraints over F_2, sampled from the solution space with the
/// seeded generator, then optionally conjugated by a random unimodular change
/// of basis at every (subgroup, vertex).
pub fn random_system<R: LinAlg>(
    ctx: &GContext,
    ring: R,
    rank: usize,
    seed: u64,
    conjugate: bool,
) -> LocalSystem<R> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let set = &ctx.gs.space;
    let nsub = ctx.cat.subgroups.len();

    let mut vars: Vec<SignVar> = vec![];
    let mut var_index: HashMap<SignVar, usize> = HashMap::new();
    let add_var = |v: SignVar, vars: &mut Vec<SignVar>, var_index: &mut HashMap<SignVar, usize>| {
        if !var_index.contains_key(&v) {
            var_index.insert(v, vars.len());
            vars.push(v);
        }
    };
    for h in 0..nsub {
        for e in ctx.fixed_nondegenerate(h, 1) {
            add_var(SignVar::Edge(h, e), &mut vars, &mut var_index);
        }
    }
    let morphisms = ctx.cat.all_non_identity_morphisms();
    for om in &morphisms {
        for &y in ctx.fixed_vertices(om.to) {
            add_var(SignVar::Orbit(om.from, om.to, om.rep, y), &mut vars, &mut var_index);
        }
    }

    // F_2 constraint rows; a nondegenerate-edge variable contributes 1, a
    // degenerate edge or identity morphism contributes nothing.
    let f2 = PrimeField::new(2).expect("2 is prime");
    let mut rows: Vec<Vec<u64>> = vec![];
    let touch = |row: &mut Vec<u64>, v: SignVar, var_index: &HashMap<SignVar, usize>| {
        if let Some(&i) = var_index.get(&v) {
            row[i] = (row[i] + 1) % 2;
        }
    };
    for h in 0..nsub {
        for x in ctx.fixed_nondegenerate(h, 2) {
            let mut row = vec![0u64; vars.len()];
            for e in [set.face(2, x, 1), set.face(2, x, 2), set.face(2, x, 0)] {
                if set.is_nondegenerate(1, e) {
                    touch(&mut row, SignVar::Edge(h, e), &var_index);
                }
            }
            rows.push(row);
        }
    }
    for om in &morphisms {
        let om_id = ctx.cat.is_identity(om);
        debug_assert!(!om_id);
        for e in ctx.fixed_nondegenerate(om.to, 1) {
            let mut row = vec![0u64; vars.len()];
            let (y1, y0) = (set.face(1, e, 1), set.face(1, e, 0));
            touch(&mut row, SignVar::Orbit(om.from, om.to, om.rep, y1), &var_index);
            touch(&mut row, SignVar::Edge(om.to, e), &var_index);
            let ge = ctx.gs.act(om.rep, 1, e);
            if set.is_nondegenerate(1, ge) {
                touch(&mut row, SignVar::Edge(om.from, ge), &var_index);
            }
            touch(&mut row, SignVar::Orbit(om.from, om.to, om.rep, y0), &var_index);
            rows.push(row);
        }
    }
    for m1 in &morphisms {
        for m2 in &morphisms {
            if m1.to != m2.from {
                continue;
            }
            let comp = ctx.cat.compose(m2, m1);
            for &z in ctx.fixed_vertices(m2.to) {
                let mut row = vec![0u64; vars.len()];
                if !ctx.cat.is_identity(&comp) {
                    touch(&mut row, SignVar::Orbit(comp.from, comp.to, comp.rep, z), &var_index);
                }
                let g2z = ctx.gs.act(m2.rep, 0, z);
                touch(&mut row, SignVar::Orbit(m1.from, m1.to, m1.rep, g2z), &var_index);
                touch(&mut row, SignVar::Orbit(m2.from, m2.to, m2.rep, z), &var_index);
                rows.push(row);
            }
        }
    }

    // sample a solution: random combination of a kernel basis
    let mut signs = vec![0u64; vars.len()];
    if !vars.is_empty() {
        let mut m = Mat::zero(f2.clone(), rows.len().max(1), vars.len());
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        let kernel = f2.kernel_basis(&m);
        for k in 0..kernel.cols {
            if rng.gen_bool(0.5) {
                for j in 0..vars.len() {
                    signs[j] = (signs[j] + kernel.at(j, k)) % 2;
                }
            }
        }
    }

    // random unimodular change of basis at each (subgroup, vertex)
    let mut basis: Vec<HashMap<usize, (Mat<R>, Mat<R>)>> = vec![HashMap::new(); nsub];
    for h in 0..nsub {
        for &v in ctx.fixed_vertices(h) {
            let p = if conjugate {
                random_unimodular(&ring, rank, &mut rng)
            } else {
                Mat::identity(ring.clone(), rank)
            };
            let p_inv = ring.inverse(&p).expect("unimodular by construction");
            basis[h].insert(v, (p, p_inv));
        }
    }

    let signed_identity = |s: u64| -> Mat<R> {
        let mut m = Mat::identity(ring.clone(), rank);
        if s == 1 {
            m = m.neg();
        }
        m
    };

    let mut ranks = vec![HashMap::new(); nsub];
    let mut edge_mats = vec![HashMap::new(); nsub];
    for h in 0..nsub {
        for &v in ctx.fixed_vertices(h) {
            ranks[h].insert(v, rank);
        }
        for e in ctx.fixed_nondegenerate(h, 1) {
            let s = signs[var_index[&SignVar::Edge(h, e)]];
            let (src, tgt) = (set.face(1, e, 1), set.face(1, e, 0));
            let m = basis[h][&src].0.matmul(&signed_identity(s)).matmul(&basis[h][&tgt].1);
            edge_mats[h].insert(e, m);
        }
    }
    let mut orbit_mats = HashMap::new();
    for om in &morphisms {
        let mut per_vertex = HashMap::new();
        for &y in ctx.fixed_vertices(om.to) {
            let s = signs[var_index[&SignVar::Orbit(om.from, om.to, om.rep, y)]];
            let gy = ctx.gs.act(om.rep, 0, y);
            let m = basis[om.from][&gy].0.matmul(&signed_identity(s)).matmul(&basis[om.to][&y].1);
            per_vertex.insert(y, m);
        }
        orbit_mats.insert((om.from, om.to, om.rep), per_vertex);
    }
    LocalSystem { ring, ranks, edge_mats, orbit_mats }
}

fn random_unimodular<R: Ring>(ring: &R, n: usize, rng: &mut ChaCha8Rng) -> Mat<R> {
    let mut m = Mat::identity(ring.clone(), n);
    if n == 0 {
        return m;
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        match rng.gen_range(0..3) {
            0 if n > 1 => {
                while j == i {
                    j = rng.gen_range(0..n);
                }
                let c = ring.from_i64(if rng.gen_bool(0.5) { 1 } else { -1 });
                m.row_axpy(i, j, &c);
            }
            1 if n > 1 => m.swap_rows(i, j),
            _ => m.scale_row(i, &ring.from_i64(-1)),
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::groupoid::PiMor;
    use crate::gspace::GSimplicialSet;
    use crate::linalg::IntRing;
    use crate::simplicial::{NondegSpec, TruncatedSimplicialSet, DEFAULT_LEVEL_LIMIT};
    use num_bigint::BigInt;

    fn wedge_swap() -> GContext {
        let mut input = vec![
            vec![NondegSpec { name: "v".into(), faces: vec![] }],
            vec![
                NondegSpec { name: "e1".into(), faces: vec!["v".into(), "v".into()] },
                NondegSpec { name: "e2".into(), faces: vec!["v".into(), "v".into()] },
            ],
        ];
        input.resize(3, vec![]);
        let set = TruncatedSimplicialSet::from_nondegenerate(&input, DEFAULT_LEVEL_LIMIT).unwrap();
        let g = FiniteGroup::cyclic(2);
        let (e1, e2) = (set.index_of(1, "e1").unwrap(), set.index_of(1, "e2").unwrap());
        let mut swap: Vec<HashMap<usize, usize>> = vec![HashMap::new(); 3];
        swap[0].insert(0, 0);
        swap[1].insert(e1, e2);
        swap[1].insert(e2, e1);
        let mut id: Vec<HashMap<usize, usize>> = vec![HashMap::new(); 3];
        id[0].insert(0, 0);
        id[1].insert(e1, e1);
        id[1].insert(e2, e2);
        GContext::new(GSimplicialSet::from_nondegenerate_action(g, set, &[id, swap]).unwrap())
    }

    fn torus_ctx() -> GContext {
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
        GContext::new(GSimplicialSet::trivial_action(FiniteGroup::trivial(), set))
    }

    #[test]
    fn constant_system_is_well_defined() {
        let ctx = wedge_swap();
        let sys = LocalSystem::constant(&ctx, IntRing, 2);
        sys.check_well_defined(&ctx).unwrap();
        // any morphism evaluates to the identity
        let e1 = ctx.gs.space.index_of(1, "e1").unwrap();
        let free = ctx.cat.subgroup_index(&[0]).unwrap();
        let m = PiMor::from_path(&ctx.cat, free, PiWord::from_edge(&ctx.gs.space, e1));
        assert!(sys.evaluate(&ctx, &m).is_identity());
    }

    #[test]
    fn sign_twist_on_torus() {
        let ctx = torus_ctx();
        let set = &ctx.gs.space;
        let mut sys = LocalSystem::constant(&ctx, IntRing, 1);
        // flipping only edge a breaks the triangle relation c = a·b
        let a = set.index_of(1, "a").unwrap();
        sys.edge_mats[0].insert(a, Mat::from_i64_rows(IntRing, &[&[-1]]));
        assert!(matches!(
            sys.check_well_defined(&ctx),
            Err(CoefficientError::Triangle { .. })
        ));
        // flipping c as well restores it
        let c = set.index_of(1, "c").unwrap();
        sys.edge_mats[0].insert(c, Mat::from_i64_rows(IntRing, &[&[-1]]));
        sys.check_well_defined(&ctx).unwrap();
        // loop a acts by -1, loop b trivially
        let wa = PiWord::from_edge(set, a);
        assert_eq!(sys.pi_action(&ctx, 0, &wa).at(0, 0), &BigInt::from(-1));
        let b = set.index_of(1, "b").unwrap();
        assert!(sys.pi_action(&ctx, 0, &PiWord::from_edge(set, b)).is_identity());
    }

    #[test]
    fn random_systems_are_well_defined() {
        let ctx = wedge_swap();
        let mut saw_nontrivial = false;
        for seed in 0..12 {
            for rank in 1..=3 {
                let sys = random_system(&ctx, IntRing, rank, seed, true);
                sys.check_well_defined(&ctx).unwrap();
                let any_nonidentity = sys.edge_mats.iter().any(|em| em.values().any(|m| !m.is_identity()));
                saw_nontrivial |= any_nonidentity;
            }
        }
        assert!(saw_nontrivial, "sampler should produce nontrivial systems");
    }

    #[test]
    fn random_systems_on_torus() {
        let ctx = torus_ctx();
        for seed in [3u64, 17, 99] {
            let sys = random_system(&ctx, IntRing, 2, seed, true);
            sys.check_well_defined(&ctx).unwrap();
        }
    }
}
