//! Cohomology of finite cochain complexes, over Z (with torsion via Smith
//! normal form) or over a field.

use crate::linalg::{GroupShape, LinAlg, Mat, Ring};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("differential d_{0} has shape {1}x{2}, expected {3}x{4}")]
    Shape(usize, usize, usize, usize, usize),
    #[error("d∘d != 0 between degrees {0} and {1}")]
    SquareNotZero(usize, usize),
}

/// Finite cochain complex C^0 -> C^1 -> ... -> C^m. `d[n]` maps degree n to
/// degree n+1; column vectors are cochains.
#[derive(Clone, Debug)]
pub struct FinCochainComplex<R: Ring> {
    pub ring: R,
    pub ranks: Vec<usize>,
    pub d: Vec<Mat<R>>,
}

impl<R: Ring> FinCochainComplex<R> {
    pub fn new(ring: R, ranks: Vec<usize>, d: Vec<Mat<R>>) -> Result<Self, ComplexError> {
        assert_eq!(d.len() + 1, ranks.len(), "need one differential per adjacent pair");
        for (n, m) in d.iter().enumerate() {
            if m.rows != ranks[n + 1] || m.cols != ranks[n] {
                return Err(ComplexError::Shape(n, m.rows, m.cols, ranks[n + 1], ranks[n]));
            }
        }
        for n in 0..d.len().saturating_sub(1) {
            if !d[n + 1].matmul(&d[n]).is_zero() {
                return Err(ComplexError::SquareNotZero(n, n + 2));
            }
        }
        Ok(FinCochainComplex { ring, ranks, d })
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }
}

/// H^n = ker(d_n) / im(d_{n-1}). Valid for n strictly below the top degree
/// (the top group has no outgoing differential, so its cocycles are not cut
/// out correctly by a truncated complex).
pub fn cohomology<R: LinAlg>(c: &FinCochainComplex<R>, n: usize) -> GroupShape {
    assert!(n < c.top_degree(), "degree {n} needs a differential out of it");
    let ring = &c.ring;
    let kernel = ring.kernel_basis(&c.d[n]);
    let image_in_kernel = if n == 0 {
        Mat::zero(ring.clone(), kernel.cols, 0)
    } else {
        ring.solve(&kernel, &c.d[n - 1])
            .expect("im(d) must lie in ker(d): complex validated at construction")
    };
    ring.quotient_shape(kernel.cols, &image_in_kernel)
}

pub fn cohomology_range<R: LinAlg>(c: &FinCochainComplex<R>, degrees: &[usize]) -> Vec<GroupShape> {
    degrees.iter().map(|&n| cohomology(c, n)).collect()
}

/// Restrict a complex to compatible subspaces: `sub[n]` columns span a
/// subgroup of C^n with d(sub[n]) contained in span(sub[n+1]). Returns the
/// complex expressed in the subspace coordinates.
pub fn restricted_complex<R: LinAlg>(
    c: &FinCochainComplex<R>,
    sub: &[Mat<R>],
) -> Result<FinCochainComplex<R>, ComplexError> {
    assert_eq!(sub.len(), c.ranks.len());
    let ring = c.ring.clone();
    let ranks: Vec<usize> = sub.iter().map(|m| m.cols).collect();
    let mut d = vec![];
    for n in 0..c.d.len() {
        let image = c.d[n].matmul(&sub[n]);
        let restricted = ring
            .solve(&sub[n + 1], &image)
            .expect("subspaces must be closed under the differential");
        d.push(restricted);
    }
    FinCochainComplex::new(ring, ranks, d)
}
