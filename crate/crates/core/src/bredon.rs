//! The equivariant cochain complex with local coefficients: cochains assign
//! to every pair (subgroup H, nondegenerate n-simplex of X^H) an element of
//! the coefficient module at the simplex's leading vertex; the subcomplex of
//! cochains compatible with all orbit-category morphisms computes the
//! equivariant cohomology.

use crate::coefficients::LocalSystem;
use crate::groupoid::PiWord;
use crate::gspace::GContext;
use crate::homology::{cohomology, restricted_complex, ComplexError, FinCochainComplex};
use crate::linalg::{GroupShape, LinAlg, Mat, Ring};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BredonError {
    #[error("degree {requested} needs truncation level at least {}, have {max}", requested + 1)]
    TruncationTooLow { requested: usize, max: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Basis bookkeeping: per degree, the (subgroup, ambient nondegenerate
/// simplex) pairs in order, with block offsets into the cochain coordinates.
pub struct CochainBasis {
    pub entries: Vec<Vec<(usize, usize)>>,
    pub offsets: Vec<Vec<usize>>,
    pub totals: Vec<usize>,
    index: Vec<HashMap<(usize, usize), usize>>,
}

impl CochainBasis {
    pub fn position(&self, n: usize, h: usize, x: usize) -> Option<usize> {
        self.index[n].get(&(h, x)).copied()
    }

    pub fn block(&self, n: usize, pos: usize) -> (usize, usize) {
        let start = self.offsets[n][pos];
        let end = self
            .offsets[n]
            .get(pos + 1)
            .copied()
            .unwrap_or(self.totals[n]);
        (start, end - start)
    }
}

/// Leading vertex (vertex 0) of a simplex.
pub fn vertex0(ctx: &GContext, n: usize, x: usize) -> usize {
    ctx.gs.space.apply_monotone(&[0], n, x)
}

pub fn cochain_basis<R: LinAlg>(ctx: &GContext, sys: &LocalSystem<R>) -> CochainBasis {
    let n_max = ctx.gs.space.n_max();
    let mut entries = vec![];
    let mut offsets = vec![];
    let mut totals = vec![];
    let mut index = vec![];
    for n in 0..=n_max {
        let mut e = vec![];
        let mut o = vec![];
        let mut ix = HashMap::new();
        let mut total = 0;
        for h in 0..ctx.cat.subgroups.len() {
            for x in ctx.fixed_nondegenerate(h, n) {
                ix.insert((h, x), e.len());
                e.push((h, x));
                o.push(total);
                total += sys.rank(h, vertex0(ctx, n, x));
            }
        }
        entries.push(e);
        offsets.push(o);
        totals.push(total);
        index.push(ix);
    }
    CochainBasis { entries, offsets, totals, index }
}

fn write_block<R: Ring>(dst: &mut Mat<R>, row: usize, col: usize, block: &Mat<R>, add: bool) {
    let ring = dst.ring.clone();
    for i in 0..block.rows {
        for j in 0..block.cols {
            let v = if add {
                ring.add(dst.at(row + i, col + j), block.at(i, j))
            } else {
                block.at(i, j).clone()
            };
            dst.set(row + i, col + j, v);
        }
    }
}

/// The coboundary from degree n to n+1. The face-0 term is twisted by the
/// leading edge of the simplex; faces of higher index keep vertex 0 and enter
/// with alternating signs. Degenerate faces contribute nothing.
pub fn coboundary<R: LinAlg>(
    ctx: &GContext,
    sys: &LocalSystem<R>,
    basis: &CochainBasis,
    n: usize,
) -> Mat<R> {
    let ring = sys.ring.clone();
    let set = &ctx.gs.space;
    let mut d = Mat::zero(ring.clone(), basis.totals[n + 1], basis.totals[n]);
    for (pos, &(h, x)) in basis.entries[n + 1].iter().enumerate() {
        let (row, _) = basis.block(n + 1, pos);
        for j in 0..=n + 1 {
            let face = set.face(n + 1, x, j);
            let Some(fpos) = basis.position(n, h, face) else {
                continue; // degenerate face
            };
            let (col, width) = basis.block(n, fpos);
            let block = if j == 0 {
                sys.word_matrix(ctx, h, &PiWord::leading_edge(set, n + 1, x))
            } else {
                let mut m = Mat::identity(ring.clone(), width);
                if j % 2 == 1 {
                    m = m.neg();
                }
                m
            };
            write_block(&mut d, row, col, &block, true);
        }
    }
    d
}

/// Rows vanish exactly on cochains compatible with every non-identity
/// orbit-category morphism: f(H, g·t) = τ(g, v0 t) · f(K, t).
pub fn compatibility_defect<R: LinAlg>(
    ctx: &GContext,
    sys: &LocalSystem<R>,
    basis: &CochainBasis,
    n: usize,
) -> Mat<R> {
    let ring = sys.ring.clone();
    let mut rows = 0;
    let mut blocks: Vec<(usize, usize, Mat<R>)> = vec![]; // (row, col, block)
    for om in ctx.cat.all_non_identity_morphisms() {
        for t in ctx.fixed_nondegenerate(om.to, n) {
            let gt = ctx.gs.act(om.rep, n, t);
            let lhs_pos = basis
                .position(n, om.from, gt)
                .expect("translate of a fixed nondegenerate simplex is one");
            let rhs_pos = basis.position(n, om.to, t).unwrap();
            let (lcol, lwidth) = basis.block(n, lhs_pos);
            let (rcol, _) = basis.block(n, rhs_pos);
            let tau = sys.orbit_matrix(ctx, &om, vertex0(ctx, n, t));
            blocks.push((rows, lcol, Mat::identity(ring.clone(), lwidth)));
            blocks.push((rows, rcol, tau.neg()));
            rows += lwidth;
        }
    }
    let mut m = Mat::zero(ring, rows, basis.totals[n]);
    for (row, col, block) in blocks {
        write_block(&mut m, row, col, &block, true);
    }
    m
}

/// The full cochain complex together with the compatible subcomplex expressed
/// in its own coordinates.
pub struct BredonComplex<R: LinAlg> {
    pub basis: CochainBasis,
    pub full: FinCochainComplex<R>,
    /// columns: basis of the compatible cochains inside the full coordinates
    pub kernels: Vec<Mat<R>>,
    pub complex: FinCochainComplex<R>,
}

pub fn build_complex<R: LinAlg>(
    ctx: &GContext,
    sys: &LocalSystem<R>,
) -> Result<BredonComplex<R>, BredonError> {
    let ring = sys.ring.clone();
    let basis = cochain_basis(ctx, sys);
    let n_max = ctx.gs.space.n_max();
    let d: Vec<Mat<R>> = (0..n_max).map(|n| coboundary(ctx, sys, &basis, n)).collect();
    let full = FinCochainComplex::new(ring.clone(), basis.totals.clone(), d)?;
    let kernels: Vec<Mat<R>> = (0..=n_max)
        .map(|n| ring.kernel_basis(&compatibility_defect(ctx, sys, &basis, n)))
        .collect();
    let complex = restricted_complex(&full, &kernels)?;
    Ok(BredonComplex { basis, full, kernels, complex })
}

/// Equivariant cohomology in the requested degrees. The truncation must
/// exceed every requested degree by one.
pub fn bredon_cohomology<R: LinAlg>(
    ctx: &GContext,
    sys: &LocalSystem<R>,
    degrees: &[usize],
) -> Result<Vec<GroupShape>, BredonError> {
    let n_max = ctx.gs.space.n_max();
    for &n in degrees {
        if n + 1 > n_max {
            return Err(BredonError::TruncationTooLow { requested: n, max: n_max });
        }
    }
    let b = build_complex(ctx, sys)?;
    Ok(degrees.iter().map(|&n| cohomology(&b.complex, n)).collect())
}
