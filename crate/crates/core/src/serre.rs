//! Equivariant fibrations: pullbacks along equivariant simplices, fiber
//! cohomology as coefficient data on the base, the skeletal filtration of the
//! total-space cochain complex, and the E₂ comparison against the base
//! cohomology with fiber coefficients (field coefficients only).

use crate::bredon::{build_complex, cochain_basis, BredonComplex, BredonError};
use crate::coefficients::{CoefficientError, LocalSystem};
use crate::groupoid::PiWord;
use crate::gspace::{is_equivariant, GContext, GSimplicialSet, GSpaceError};
use crate::homology::cohomology;
use crate::linalg::{Field, GroupShape, LinAlg, Mat};
use crate::simplicial::{
    SimplicialError, SimplicialMap, TruncatedSimplicialSet, DEFAULT_LEVEL_LIMIT,
};
use crate::spectral::{FilteredComplex, FiltrationError, SpectralPage, SpectralSequence};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SerreError {
    #[error("the projection is not simplicial: {0}")]
    NotSimplicial(#[from] SimplicialError),
    #[error("the projection is not equivariant")]
    NotEquivariant,
    #[error("truncation heights differ: total space {0}, base {1}")]
    HeightMismatch(usize, usize),
    #[error("fiber cohomology is not constant over the {subgroup:?}-fixed base: vertices {first:?} and {second:?} lie in one component but give dimensions {dims_first:?} vs {dims_second:?}")]
    NotFibrationLike {
        subgroup: String,
        first: String,
        second: String,
        dims_first: Vec<usize>,
        dims_second: Vec<usize>,
    },
    #[error("fiber monodromy looks nontrivial at {witness:?} over the {subgroup:?}-fixed base and no fiber coefficient system was supplied")]
    MonodromyNotSupplied { subgroup: String, witness: String },
    #[error("expected one fiber system per degree 0..={expected}, got {got}")]
    WrongSystemCount { expected: usize, got: usize },
    #[error("supplied fiber system for q={q} has rank {got} at subgroup {subgroup:?}, vertex {vertex:?}, but the fiber cohomology there has dimension {want}")]
    SuppliedRankMismatch { q: usize, subgroup: String, vertex: String, got: usize, want: usize },
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
    #[error(transparent)]
    Bredon(#[from] BredonError),
    #[error(transparent)]
    Action(#[from] GSpaceError),
    #[error(transparent)]
    Coefficient(#[from] CoefficientError),
}

/// An equivariant map of G-simplicial sets treated as a candidate fibration.
pub struct Fibration {
    pub total: GContext,
    pub base: GContext,
    pub map: SimplicialMap,
}

impl Fibration {
    pub fn new(
        total: GSimplicialSet,
        base: GSimplicialSet,
        map: SimplicialMap,
    ) -> Result<Self, SerreError> {
        if total.space.n_max() != base.space.n_max() {
            return Err(SerreError::HeightMismatch(total.space.n_max(), base.space.n_max()));
        }
        map.validate(&total.space, &base.space)?;
        if !is_equivariant(&map, &total, &base) {
            return Err(SerreError::NotEquivariant);
        }
        Ok(Fibration { total: GContext::new(total), base: GContext::new(base), map })
    }

    fn subgroup_name(&self, h: usize) -> String {
        let group = &self.base.gs.group;
        let names: Vec<&str> =
            self.base.cat.subgroups[h].iter().map(|&g| group.names[g].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// Left cosets of a subgroup, each sorted; the representative is the minimum.
fn cosets(group: &crate::group::FiniteGroup, h: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; group.order()];
    let mut out = vec![];
    for g in 0..group.order() {
        if seen[g] {
            continue;
        }
        let mut coset: Vec<usize> = h.iter().map(|&k| group.mul(g, k)).collect();
        coset.sort_unstable();
        for &e in &coset {
            seen[e] = true;
        }
        out.push(coset);
    }
    out.sort();
    out
}

/// The G-simplicial set G/H × Δ[n]: one copy of the standard n-simplex per
/// coset, with G permuting the copies.
pub fn orbit_times_simplex(
    ctx: &GContext,
    h: usize,
    n: usize,
    level_limit: usize,
) -> Result<GSimplicialSet, SerreError> {
    let group = &ctx.gs.group;
    let n_max = ctx.gs.space.n_max();
    let cos = cosets(group, &ctx.cat.subgroups[h]);
    let discrete_input: Vec<Vec<crate::simplicial::NondegSpec>> = {
        let mut v = vec![cos
            .iter()
            .map(|c| crate::simplicial::NondegSpec {
                name: format!("{}H", group.names[c[0]]),
                faces: vec![],
            })
            .collect()];
        v.resize(n_max + 1, vec![]);
        v
    };
    let discrete = TruncatedSimplicialSet::from_nondegenerate(&discrete_input, level_limit)?;
    let delta = TruncatedSimplicialSet::standard_simplex(n, n_max);
    let prod = TruncatedSimplicialSet::product(&discrete, &delta, level_limit)?;
    // every level-m simplex of the discrete factor sits over a unique vertex
    let tower_over = |v: usize, m: usize| -> usize {
        let mut idx = v;
        for k in 0..m {
            idx = discrete.degeneracy(k, idx, 0);
        }
        idx
    };
    let mut action = vec![];
    for g in 0..group.order() {
        let mut levels = vec![];
        for m in 0..=n_max {
            let dm = delta.size(m);
            let mut level = vec![0usize; prod.size(m)];
            for i in 0..prod.size(m) {
                let (a, b) = (i / dm, i % dm);
                let va = discrete.apply_monotone(&[0], m, a);
                let moved = group.mul(g, cos[va][0]);
                let target = cos.iter().position(|c| c.contains(&moved)).unwrap();
                level[i] = tower_over(target, m) * dm + b;
            }
            levels.push(level);
        }
        action.push(SimplicialMap { levels });
    }
    Ok(GSimplicialSet::new(group.clone(), prod, action)?)
}

/// The characteristic map G/H × Δ[n] → X of an equivariant simplex (H, x):
/// the coset of g sends the simplex copy to the g-translate of x.
fn characteristic_values(
    ctx: &GContext,
    h: usize,
    n: usize,
    x: usize,
    prod: &TruncatedSimplicialSet,
) -> Vec<Vec<usize>> {
    let group = &ctx.gs.group;
    let cos = cosets(group, &ctx.cat.subgroups[h]);
    let n_max = ctx.gs.space.n_max();
    let delta_sizes: Vec<usize> = {
        // recover the Δ[n] factor sizes from the product layout
        (0..=n_max).map(|m| prod.size(m) / cos.len()).collect()
    };
    let delta = TruncatedSimplicialSet::standard_simplex(n, n_max);
    let mut out = vec![];
    for m in 0..=n_max {
        let dm = delta_sizes[m];
        let mut level = vec![0usize; prod.size(m)];
        for i in 0..prod.size(m) {
            let (a, b) = (i / dm, i % dm);
            // vertex sequence of the Δ[n] simplex, as a monotone map into [n]
            let seq: Vec<usize> = (0..=m).map(|k| delta.apply_monotone(&[k], m, b)).collect();
            let body = ctx.gs.space.apply_monotone(&seq, n, x);
            level[i] = ctx.gs.act(cos[a][0], m, body);
        }
        out.push(level);
    }
    out
}

/// The fiber product (G/H × Δ[n]) ×_X Y of an equivariant simplex of the base
/// with the projection, carrying the diagonal action and the map to Y.
pub struct Pullback {
    pub space: GSimplicialSet,
    pub to_total: SimplicialMap,
}

pub fn pullback(
    fib: &Fibration,
    h: usize,
    n: usize,
    x: usize,
    level_limit: usize,
) -> Result<Pullback, SerreError> {
    let front = orbit_times_simplex(&fib.base, h, n, level_limit)?;
    let chi = characteristic_values(&fib.base, h, n, x, &front.space);
    let y = &fib.total.gs.space;
    let n_max = y.n_max();
    let mut pairs: Vec<Vec<(usize, usize)>> = vec![];
    let mut index: Vec<HashMap<(usize, usize), usize>> = vec![];
    for m in 0..=n_max {
        let mut level = vec![];
        let mut ix = HashMap::new();
        for w in 0..front.space.size(m) {
            for yy in 0..y.size(m) {
                if chi[m][w] == fib.map.apply(m, yy) {
                    ix.insert((w, yy), level.len());
                    level.push((w, yy));
                }
            }
        }
        if level.len() > level_limit {
            return Err(SerreError::NotSimplicial(SimplicialError::LevelTooLarge {
                level: m,
                size: level.len(),
                max: level_limit,
            }));
        }
        pairs.push(level);
        index.push(ix);
    }
    let mut names = vec![];
    let mut faces = vec![];
    let mut degs = vec![];
    for m in 0..=n_max {
        names.push(
            pairs[m]
                .iter()
                .map(|&(w, yy)| format!("({}; {})", front.space.name(m, w), y.name(m, yy)))
                .collect::<Vec<_>>(),
        );
        faces.push(
            pairs[m]
                .iter()
                .map(|&(w, yy)| {
                    (0..if m == 0 { 0 } else { m + 1 })
                        .map(|i| index[m - 1][&(front.space.face(m, w, i), y.face(m, yy, i))])
                        .collect()
                })
                .collect::<Vec<Vec<usize>>>(),
        );
        if m < n_max {
            degs.push(
                pairs[m]
                    .iter()
                    .map(|&(w, yy)| {
                        (0..=m)
                            .map(|i| {
                                index[m + 1]
                                    [&(front.space.degeneracy(m, w, i), y.degeneracy(m, yy, i))]
                            })
                            .collect()
                    })
                    .collect::<Vec<Vec<usize>>>(),
            );
        } else {
            degs.push(vec![]);
        }
    }
    let space = TruncatedSimplicialSet::from_tables(names, faces, degs);
    let group = fib.base.gs.group.clone();
    let mut action = vec![];
    for g in 0..group.order() {
        let levels: Vec<Vec<usize>> = (0..=n_max)
            .map(|m| {
                pairs[m]
                    .iter()
                    .map(|&(w, yy)| {
                        index[m][&(front.act(g, m, w), fib.total.gs.act(g, m, yy))]
                    })
                    .collect()
            })
            .collect();
        action.push(SimplicialMap { levels });
    }
    let to_total = SimplicialMap {
        levels: (0..=n_max).map(|m| pairs[m].iter().map(|&(_, yy)| yy).collect()).collect(),
    };
    Ok(Pullback { space: GSimplicialSet::new(group, space, action)?, to_total })
}

/// Pull a coefficient system back along an equivariant simplicial map (both
/// spaces over the same group, so the orbit categories agree).
pub fn restrict_system<R: LinAlg>(
    sub: &GContext,
    ambient: &GContext,
    sys: &LocalSystem<R>,
    map: &SimplicialMap,
) -> LocalSystem<R> {
    let nsub = sub.cat.subgroups.len();
    let mut ranks = vec![HashMap::new(); nsub];
    let mut edge_mats = vec![HashMap::new(); nsub];
    for h in 0..nsub {
        for &v in sub.fixed_vertices(h) {
            ranks[h].insert(v, sys.rank(h, map.apply(0, v)));
        }
        for e in sub.fixed_nondegenerate(h, 1) {
            let img = map.apply(1, e);
            let word = PiWord::from_edge(&ambient.gs.space, img);
            edge_mats[h].insert(e, sys.word_matrix(ambient, h, &word));
        }
    }
    let mut orbit_mats = HashMap::new();
    for m in sub.cat.all_non_identity_morphisms() {
        let mut per_vertex = HashMap::new();
        for &v in sub.fixed_vertices(m.to) {
            per_vertex.insert(v, sys.orbit_matrix(ambient, &m, map.apply(0, v)));
        }
        orbit_mats.insert((m.from, m.to, m.rep), per_vertex);
    }
    LocalSystem { ring: sys.ring.clone(), ranks, edge_mats, orbit_mats }
}

/// Cohomology of one vertex fiber.
pub struct VertexFiber {
    pub subgroup: usize,
    /// ambient vertex index in the base
    pub vertex: usize,
    pub cohomology: Vec<GroupShape>,
}

pub struct FiberData {
    pub qmax: usize,
    pub fibers: Vec<VertexFiber>,
    /// true when the vertex-fiber component transport found no crossing
    pub monodromy_trivial: bool,
}

impl FiberData {
    pub fn dims(&self, h: usize, v: usize) -> Option<Vec<usize>> {
        self.fibers
            .iter()
            .find(|f| f.subgroup == h && f.vertex == v)
            .map(|f| f.cohomology.iter().map(|s| s.rank).collect())
    }
}

/// Connected components of a vertex list under the given edge set.
fn components(vertices: &[usize], edges: &[(usize, usize)]) -> HashMap<usize, usize> {
    let mut comp: HashMap<usize, usize> = vertices.iter().map(|&v| (v, v)).collect();
    let find = |comp: &HashMap<usize, usize>, mut v: usize| -> usize {
        while comp[&v] != v {
            v = comp[&v];
        }
        v
    };
    for &(a, b) in edges {
        let (ra, rb) = (find(&comp, a), find(&comp, b));
        if ra != rb {
            comp.insert(ra, rb);
        }
    }
    vertices.iter().map(|&v| (v, find(&comp, v))).collect()
}

/// H_G^q of every vertex fiber, with the constancy check along base
/// components and the loop-transport monodromy heuristic.
pub fn fiber_cohomology<R: LinAlg>(
    fib: &Fibration,
    sys: &LocalSystem<R>,
    qmax: usize,
) -> Result<FiberData, SerreError> {
    let base = &fib.base;
    let mut fibers = vec![];
    let mut monodromy_trivial = true;
    for h in 0..base.cat.subgroups.len() {
        let verts: Vec<usize> = base.fixed_vertices(h).to_vec();
        let base_edges: Vec<(usize, usize)> = base
            .fixed_nondegenerate(h, 1)
            .iter()
            .map(|&e| (base.gs.space.face(1, e, 1), base.gs.space.face(1, e, 0)))
            .collect();
        let base_comp = components(&verts, &base_edges);
        let mut dims_of: HashMap<usize, (usize, Vec<usize>)> = HashMap::new();
        for &v in &verts {
            let pb = pullback(fib, h, 0, v, DEFAULT_LEVEL_LIMIT)?;
            let fiber_ctx = GContext::new(pb.space);
            let fiber_sys = restrict_system(&fiber_ctx, &fib.total, sys, &pb.to_total);
            let degrees: Vec<usize> = (0..=qmax).collect();
            let shapes = crate::bredon::bredon_cohomology(&fiber_ctx, &fiber_sys, &degrees)?;
            let dims: Vec<usize> = shapes.iter().map(|s| s.rank).collect();
            let c = base_comp[&v];
            if let Some((v0, d0)) = dims_of.get(&c) {
                if *d0 != dims {
                    return Err(SerreError::NotFibrationLike {
                        subgroup: fib.subgroup_name(h),
                        first: base.gs.space.name(0, *v0).to_string(),
                        second: base.gs.space.name(0, v).to_string(),
                        dims_first: d0.clone(),
                        dims_second: dims,
                    });
                }
            } else {
                dims_of.insert(c, (v, dims.clone()));
            }
            fibers.push(VertexFiber { subgroup: h, vertex: v, cohomology: shapes });
        }
        // transport along loop edges of the fixed base: a lift whose endpoints
        // sit in different vertical components witnesses nontrivial monodromy
        let total_space = &fib.total.gs.space;
        for &eb in &base.fixed_nondegenerate(h, 1) {
            let src = base.gs.space.face(1, eb, 1);
            let tgt = base.gs.space.face(1, eb, 0);
            if src != tgt {
                continue; // only loops can be compared without an identification
            }
            let fiber_verts: Vec<usize> = fib
                .total
                .fixed_vertices(h)
                .iter()
                .copied()
                .filter(|&w| fib.map.apply(0, w) == src)
                .collect();
            let vertical: Vec<(usize, usize)> = fib
                .total
                .fixed_nondegenerate(h, 1)
                .iter()
                .filter(|&&e| !base.gs.space.is_nondegenerate(1, fib.map.apply(1, e)))
                .map(|&e| (total_space.face(1, e, 1), total_space.face(1, e, 0)))
                .filter(|(a, b)| fiber_verts.contains(a) && fiber_verts.contains(b))
                .collect();
            let comp = components(&fiber_verts, &vertical);
            for &e in &fib.total.fixed_nondegenerate(h, 1) {
                if fib.map.apply(1, e) != eb {
                    continue;
                }
                let (a, b) = (total_space.face(1, e, 1), total_space.face(1, e, 0));
                if comp.get(&a) != comp.get(&b) {
                    monodromy_trivial = false;
                }
            }
        }
    }
    Ok(FiberData { qmax, fibers, monodromy_trivial })
}

/// S_G^•(Y; M) filtered by the nondegenerate dimension of the base image:
/// F^p = cochains vanishing on (H, y) with dim f(y) < p, in the coordinates
/// of the compatible subcomplex.
pub fn skeletal_filtration<F: Field + LinAlg>(
    fib: &Fibration,
    sys: &LocalSystem<F>,
) -> Result<(BredonComplex<F>, FilteredComplex<F>), SerreError> {
    let ring = sys.ring.clone();
    let b = build_complex(&fib.total, sys)?;
    let basis = cochain_basis(&fib.total, sys);
    let n_max = fib.total.gs.space.n_max();
    let base = &fib.base.gs.space;
    let mut filt = vec![];
    for p in 0..=base.n_max() {
        let mut level = vec![];
        for n in 0..=n_max {
            let mut bad_rows = vec![];
            for (pos, &(_, yidx)) in basis.entries[n].iter().enumerate() {
                let img = fib.map.apply(n, yidx);
                if base.nondeg_dimension(n, img) < p {
                    let (start, width) = basis.block(n, pos);
                    bad_rows.extend(start..start + width);
                }
            }
            let restricted = b.kernels[n].select_rows(&bad_rows);
            level.push(ring.kernel_basis(&restricted));
        }
        filt.push(level);
    }
    let fc = FilteredComplex::new(b.complex.clone(), filt)?;
    Ok((b, fc))
}

/// Constant-monodromy coefficient data on the base, with ranks taken from the
/// fiber cohomology in degree q.
fn assemble_constant_fiber_system<F: Field + LinAlg>(
    fib: &Fibration,
    ring: F,
    fiber: &FiberData,
    q: usize,
) -> Result<LocalSystem<F>, SerreError> {
    let base = &fib.base;
    let nsub = base.cat.subgroups.len();
    let mut ranks = vec![HashMap::new(); nsub];
    let mut edge_mats = vec![HashMap::new(); nsub];
    for h in 0..nsub {
        for &v in base.fixed_vertices(h) {
            ranks[h].insert(v, fiber.dims(h, v).unwrap()[q]);
        }
        for e in base.fixed_nondegenerate(h, 1) {
            let src = base.gs.space.face(1, e, 1);
            let tgt = base.gs.space.face(1, e, 0);
            assert_eq!(ranks[h][&src], ranks[h][&tgt], "constancy was checked per component");
            edge_mats[h].insert(e, Mat::identity(ring.clone(), ranks[h][&src]));
        }
    }
    let mut orbit_mats = HashMap::new();
    for m in base.cat.all_non_identity_morphisms() {
        let mut per_vertex = HashMap::new();
        for &v in base.fixed_vertices(m.to) {
            let up = ranks[m.from][&base.gs.act(m.rep, 0, v)];
            let down = ranks[m.to][&v];
            if up != down {
                return Err(SerreError::MonodromyNotSupplied {
                    subgroup: fib.subgroup_name(m.from),
                    witness: format!(
                        "orbit morphism to {} at vertex {}",
                        fib.subgroup_name(m.to),
                        base.gs.space.name(0, v)
                    ),
                });
            }
            per_vertex.insert(v, Mat::identity(ring.clone(), down));
        }
        orbit_mats.insert((m.from, m.to, m.rep), per_vertex);
    }
    Ok(LocalSystem { ring, ranks, edge_mats, orbit_mats })
}

pub struct SerreReport {
    pub deg_max: usize,
    /// E₂ of the skeletal filtration
    pub e2: SpectralPage,
    /// H_G^p(base; fiber system for q), over the comparable (p, q) range
    pub expected_e2: BTreeMap<(usize, i64), usize>,
    pub e2_agrees: bool,
    pub pages: Vec<SpectralPage>,
    pub infinity: SpectralPage,
    pub collapse_at_two: bool,
    /// dim H_G^n(Y; M) for n = 0..=deg_max
    pub total_cohomology: Vec<usize>,
    pub abutment_ok: bool,
    pub fiber_dims_by_subgroup_vertex: BTreeMap<(usize, usize), Vec<usize>>,
    pub monodromy_trivial: bool,
}

/// The full Theorem-level comparison: skeletal E₂ against the base cohomology
/// with fiber coefficients, plus the abutment identity.
pub fn e2_compare<F: Field + LinAlg>(
    fib: &Fibration,
    sys: &LocalSystem<F>,
    supplied: Option<&[LocalSystem<F>]>,
    rmax: usize,
) -> Result<SerreReport, SerreError> {
    let ring = sys.ring.clone();
    let n_max = fib.total.gs.space.n_max();
    let deg_max = n_max - 1;
    let fiber = fiber_cohomology(fib, sys, deg_max)?;

    let systems: Vec<LocalSystem<F>> = match supplied {
        Some(list) => {
            if list.len() != deg_max + 1 {
                return Err(SerreError::WrongSystemCount { expected: deg_max, got: list.len() });
            }
            for (q, s) in list.iter().enumerate() {
                s.check_well_defined(&fib.base)?;
                for h in 0..fib.base.cat.subgroups.len() {
                    for &v in fib.base.fixed_vertices(h) {
                        let want = fiber.dims(h, v).unwrap()[q];
                        if s.rank(h, v) != want {
                            return Err(SerreError::SuppliedRankMismatch {
                                q,
                                subgroup: fib.subgroup_name(h),
                                vertex: fib.base.gs.space.name(0, v).to_string(),
                                got: s.rank(h, v),
                                want,
                            });
                        }
                    }
                }
            }
            list.to_vec()
        }
        None => {
            if !fiber.monodromy_trivial {
                return Err(SerreError::MonodromyNotSupplied {
                    subgroup: "".into(),
                    witness: "a loop lift crossing fiber components".into(),
                });
            }
            (0..=deg_max)
                .map(|q| assemble_constant_fiber_system(fib, ring.clone(), &fiber, q))
                .collect::<Result<_, _>>()?
        }
    };

    let mut expected_e2 = BTreeMap::new();
    let p_top = fib.base.gs.space.n_max() - 1;
    for (q, sq) in systems.iter().enumerate() {
        let bb = build_complex(&fib.base, sq)?;
        for p in 0..=p_top.min(deg_max - q) {
            let dim = cohomology(&bb.complex, p).rank;
            if dim > 0 {
                expected_e2.insert((p, q as i64), dim);
            }
        }
    }

    let (b, fc) = skeletal_filtration(fib, sys)?;
    let ss = SpectralSequence::new(&fc, deg_max);
    let e2 = ss.page(2);
    let e2_agrees = {
        let mut ok = true;
        for p in 0..=p_top {
            for q in 0..=(deg_max.saturating_sub(p)) {
                let found = e2.dim(p, q as i64);
                let want = expected_e2.get(&(p, q as i64)).copied().unwrap_or(0);
                if found != want {
                    ok = false;
                }
            }
        }
        ok
    };
    let pages: Vec<SpectralPage> = (2..=rmax.max(2)).map(|r| ss.page(r)).collect();
    let infinity = ss.infinity();
    let collapse_at_two = e2.dims == infinity.dims;
    let total_cohomology: Vec<usize> =
        (0..=deg_max).map(|n| cohomology(&b.complex, n).rank).collect();
    let abutment_ok =
        (0..=deg_max).all(|n| infinity.total_dim(n) == total_cohomology[n]);

    Ok(SerreReport {
        deg_max,
        e2,
        expected_e2,
        e2_agrees,
        pages,
        infinity,
        collapse_at_two,
        total_cohomology,
        abutment_ok,
        fiber_dims_by_subgroup_vertex: fiber
            .fibers
            .iter()
            .map(|f| {
                ((f.subgroup, f.vertex), f.cohomology.iter().map(|s| s.rank).collect())
            })
            .collect(),
        monodromy_trivial: fiber.monodromy_trivial,
    })
}
