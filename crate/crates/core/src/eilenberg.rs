//! The invariant cochain complex on the universal covers: cochains on cover
//! simplices, equivariant under the deck action and natural across the orbit
//! category, encoded on the canonical representatives (empty word, x). Built
//! from the covering operations and the module action only — independently of
//! the equivariant cochain module — so that agreement of the two pipelines is
//! a genuine cross-check.

use crate::bredon::{build_complex, cochain_basis, BredonError, CochainBasis};
use crate::coefficients::LocalSystem;
use crate::covering::{cover_action, cover_face, one_vertex, CoverError, CoverSimplex};
use crate::groupoid::PiWord;
use crate::gspace::GContext;
use crate::homology::{cohomology, restricted_complex, ComplexError, FinCochainComplex};
use crate::linalg::{GroupShape, LinAlg, Mat, Ring};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EilenbergError {
    #[error(transparent)]
    NotOneVertex(#[from] CoverError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Bredon(#[from] BredonError),
}

/// The coboundary on representatives: the 0th cover face lands at a lift
/// (γ, ∂₀x); deck equivariance transports its value back through the module
/// action of γ. Higher faces keep the representative lift.
pub fn invariant_coboundary<R: LinAlg>(
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
        let rep = CoverSimplex::representative(set, h, n + 1, x);
        for i in 0..=n + 1 {
            let face = cover_face(set, i, &rep);
            let Some(fpos) = basis.position(n, h, face.x) else {
                continue; // degenerate face carries no value
            };
            let (col, width) = basis.block(n, fpos);
            let mut block = sys.word_matrix(ctx, h, &face.word);
            debug_assert_eq!(block.cols, width);
            if i % 2 == 1 {
                block = block.neg();
            }
            for r in 0..block.rows {
                for c in 0..block.cols {
                    let v = ring.add(d.at(row + r, col + c), block.at(r, c));
                    d.set(row + r, col + c, v);
                }
            }
        }
    }
    d
}

/// Rows vanish on cochains natural across the orbit category: the value at
/// the translated representative must be the structural matrix applied to the
/// original value.
pub fn naturality_defect<R: LinAlg>(
    ctx: &GContext,
    sys: &LocalSystem<R>,
    basis: &CochainBasis,
    n: usize,
) -> Mat<R> {
    let ring = sys.ring.clone();
    let v = one_vertex(&ctx.gs.space).expect("validated earlier");
    let mut rows = 0;
    let mut blocks: Vec<(usize, usize, Mat<R>)> = vec![];
    for om in ctx.cat.all_non_identity_morphisms() {
        let tau = sys.orbit_matrix(ctx, &om, v);
        for t in ctx.fixed_nondegenerate(om.to, n) {
            let gt = ctx.gs.act(om.rep, n, t);
            let lpos = basis.position(n, om.from, gt).expect("translate stays fixed and nondegenerate");
            let rpos = basis.position(n, om.to, t).unwrap();
            let (lcol, lwidth) = basis.block(n, lpos);
            let (rcol, _) = basis.block(n, rpos);
            blocks.push((rows, lcol, Mat::identity(ring.clone(), lwidth)));
            blocks.push((rows, rcol, tau.neg()));
            rows += lwidth;
        }
    }
    let mut m = Mat::zero(ring.clone(), rows, basis.totals[n]);
    for (row, col, block) in blocks {
        for r in 0..block.rows {
            for c in 0..block.cols {
                let vl = ring.add(m.at(row + r, col + c), block.at(r, c));
                m.set(row + r, col + c, vl);
            }
        }
    }
    m
}

pub struct InvariantComplex<R: LinAlg> {
    pub basis: CochainBasis,
    pub full: FinCochainComplex<R>,
    pub kernels: Vec<Mat<R>>,
    pub complex: FinCochainComplex<R>,
}

pub fn build_invariant_complex<R: LinAlg>(
    ctx: &GContext,
    sys: &LocalSystem<R>,
) -> Result<InvariantComplex<R>, EilenbergError> {
    one_vertex(&ctx.gs.space)?;
    let ring = sys.ring.clone();
    let basis = cochain_basis(ctx, sys);
    let n_max = ctx.gs.space.n_max();
    let d: Vec<Mat<R>> = (0..n_max).map(|n| invariant_coboundary(ctx, sys, &basis, n)).collect();
    let full = FinCochainComplex::new(ring.clone(), basis.totals.clone(), d)?;
    let kernels: Vec<Mat<R>> = (0..=n_max)
        .map(|n| ring.kernel_basis(&naturality_defect(ctx, sys, &basis, n)))
        .collect();
    let complex = restricted_complex(&full, &kernels)?;
    Ok(InvariantComplex { basis, full, kernels, complex })
}

fn vector_block<R: Ring>(v: &Mat<R>, start: usize, width: usize) -> Mat<R> {
    let rows: Vec<usize> = (start..start + width).collect();
    v.select_rows(&rows)
}

/// Value of φ(f) at an arbitrary cover simplex (γ, x): the module action of
/// γ applied to the value of f at the underlying equivariant simplex. On the
/// canonical representatives this is f itself.
pub fn phi_at<R: LinAlg>(
    ctx: &GContext,
    sys: &LocalSystem<R>,
    basis: &CochainBasis,
    f: &Mat<R>,
    y: &CoverSimplex,
) -> Mat<R> {
    let pos = basis.position(y.n, y.h, y.x).expect("nondegenerate simplex");
    let (start, width) = basis.block(y.n, pos);
    let block = vector_block(f, start, width);
    sys.word_matrix(ctx, y.h, &y.word).matmul(&block)
}

/// Value of ψ(F) at the equivariant simplex under an arbitrary chosen lift:
/// transport the value of F at the lift back through the inverse module
/// action. Independence of the lift is the well-definedness of ψ.
pub fn psi_at<R: LinAlg>(
    ctx: &GContext,
    sys: &LocalSystem<R>,
    basis: &CochainBasis,
    big_f: &Mat<R>,
    lift: &CoverSimplex,
) -> Mat<R> {
    let value = phi_at(ctx, sys, basis, big_f, lift); // F at the lift, by equivariance
    let m = sys.word_matrix(ctx, lift.h, &lift.word);
    sys.ring.inverse(&m).expect("path matrices invertible").matmul(&value)
}

#[derive(Debug)]
pub struct EilenbergReport {
    pub degrees: Vec<usize>,
    pub matrix_equal: bool,
    pub kernels_equal: bool,
    pub maps_inverse: bool,
    pub equivariance_ok: bool,
    pub bredon_shapes: Vec<GroupShape>,
    pub invariant_shapes: Vec<GroupShape>,
    pub cohomology_agree: bool,
    pub failures: Vec<String>,
}

impl EilenbergReport {
    pub fn all_ok(&self) -> bool {
        self.matrix_equal
            && self.kernels_equal
            && self.maps_inverse
            && self.equivariance_ok
            && self.cohomology_agree
    }
}

/// Sample loop words at the unique vertex of X^H: single nondegenerate edges
/// and their two-letter products (including inverses).
fn sample_loops(ctx: &GContext, h: usize) -> Vec<PiWord> {
    let set = &ctx.gs.space;
    let edges = ctx.fixed_nondegenerate(h, 1);
    let mut out = vec![PiWord::identity(0)];
    for &e in edges.iter().take(3) {
        let w = PiWord::from_edge(set, e);
        out.push(w.clone());
        out.push(w.inverse());
        for &e2 in edges.iter().take(3) {
            out.push(w.then(&PiWord::from_edge(set, e2)));
        }
    }
    out
}

/// Both pipelines end to end, with the cochain-level identities.
pub fn verify_eilenberg<R: LinAlg>(
    ctx: &GContext,
    sys: &LocalSystem<R>,
) -> Result<EilenbergReport, EilenbergError> {
    one_vertex(&ctx.gs.space)?;
    let ring = sys.ring.clone();
    let set = &ctx.gs.space;
    let n_max = set.n_max();
    let degrees: Vec<usize> = (0..n_max).collect();
    let mut failures = vec![];

    let bredon = build_complex(ctx, sys)?;
    let inv = build_invariant_complex(ctx, sys)?;

    let mut matrix_equal = true;
    for n in 0..n_max {
        if bredon.full.d[n] != inv.full.d[n] {
            matrix_equal = false;
            failures.push(format!("coboundary matrices differ in degree {n}"));
        }
    }

    let mut kernels_equal = true;
    for n in 0..=n_max {
        let a = &bredon.kernels[n];
        let b = &inv.kernels[n];
        if ring.solve(a, b).is_none() || ring.solve(b, a).is_none() {
            kernels_equal = false;
            failures.push(format!("compatibility and naturality kernels differ in degree {n}"));
        }
    }

    // ψ∘φ = id on compatible cochains, φ∘ψ = id on natural ones, and
    // π-equivariance of φ(f), all through sampled lifts.
    let mut maps_inverse = true;
    let mut equivariance_ok = true;
    for n in 0..=n_max {
        for col in 0..bredon.kernels[n].cols {
            let f = bredon.kernels[n].select_columns(&[col]);
            for (pos, &(h, x)) in bredon.basis.entries[n].iter().enumerate() {
                let rep = CoverSimplex::representative(set, h, n, x);
                let (start, width) = bredon.basis.block(n, pos);
                let expected = vector_block(&f, start, width);
                for gamma in sample_loops(ctx, h) {
                    let lift = cover_action(&rep, &gamma.inverse());
                    let recovered = psi_at(ctx, sys, &bredon.basis, &f, &lift);
                    if recovered != expected {
                        maps_inverse = false;
                        failures.push(format!(
                            "lift dependence at degree {n}, simplex {:?}",
                            set.name(n, x)
                        ));
                    }
                    // φ(f)(u·y) = M(b u)^{-1} φ(f)(y)
                    for u in sample_loops(ctx, h) {
                        let lhs = phi_at(ctx, sys, &bredon.basis, &f, &cover_action(&lift, &u));
                        let act = ring
                            .inverse(&sys.word_matrix(ctx, h, &u))
                            .expect("invertible");
                        let rhs = act.matmul(&phi_at(ctx, sys, &bredon.basis, &f, &lift));
                        if lhs != rhs {
                            equivariance_ok = false;
                            failures.push(format!(
                                "equivariance fails at degree {n}, simplex {:?}",
                                set.name(n, x)
                            ));
                        }
                    }
                }
            }
        }
    }

    let bredon_shapes: Vec<GroupShape> =
        degrees.iter().map(|&n| cohomology(&bredon.complex, n)).collect();
    let invariant_shapes: Vec<GroupShape> =
        degrees.iter().map(|&n| cohomology(&inv.complex, n)).collect();
    let cohomology_agree = bredon_shapes == invariant_shapes;
    if !cohomology_agree {
        failures.push("cohomology shapes differ".to_string());
    }

    Ok(EilenbergReport {
        degrees,
        matrix_equal,
        kernels_equal,
        maps_inverse,
        equivariance_ok,
        bredon_shapes,
        invariant_shapes,
        cohomology_agree,
        failures,
    })
}
