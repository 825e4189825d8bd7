//! Spectral sequence of a filtered cochain complex over a field, computed by
//! exact subquotient dimensions.

use crate::homology::{cohomology, FinCochainComplex};
use crate::linalg::{column_space_basis, extend_basis, Field, LinAlg, Mat};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FiltrationError {
    #[error("filtration step {0} of degree {1} is not contained in step {2}")]
    NotDecreasing(usize, usize, usize),
    #[error("filtration step 0 of degree {0} does not span the whole group")]
    NotSpanning(usize),
    #[error("filtration step {0} of degree {1} is not stable under the differential")]
    NotStable(usize, usize),
}

/// Decreasing filtration F^0 ⊇ F^1 ⊇ ... of a finite cochain complex;
/// `filt[p][n]` holds a column basis of F^p C^n. Everything past the last
/// listed step is zero.
pub struct FilteredComplex<F: Field> {
    pub complex: FinCochainComplex<F>,
    pub filt: Vec<Vec<Mat<F>>>,
}

impl<F: Field> FilteredComplex<F> {
    pub fn new(complex: FinCochainComplex<F>, filt: Vec<Vec<Mat<F>>>) -> Result<Self, FiltrationError> {
        let ring = complex.ring.clone();
        let top = complex.top_degree();
        for (p, level) in filt.iter().enumerate() {
            assert_eq!(level.len(), top + 1, "one basis per degree per step");
            for n in 0..=top {
                if p == 0 {
                    if ring.rank(&level[n]) != complex.ranks[n] {
                        return Err(FiltrationError::NotSpanning(n));
                    }
                } else if ring.solve(&filt[p - 1][n], &level[n]).is_none() {
                    return Err(FiltrationError::NotDecreasing(p, n, p - 1));
                }
                if n < top {
                    let image = complex.d[n].matmul(&level[n]);
                    if image.cols > 0 && ring.solve(&level[n + 1], &image).is_none() {
                        return Err(FiltrationError::NotStable(p, n));
                    }
                }
            }
        }
        Ok(FilteredComplex { complex, filt })
    }

    pub fn p_max(&self) -> usize {
        self.filt.len().saturating_sub(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralPage {
    /// r of the page, or None for the limit page.
    pub r: Option<usize>,
    pub dims: BTreeMap<(usize, i64), usize>,
}

impl SpectralPage {
    pub fn dim(&self, p: usize, q: i64) -> usize {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn total_dim(&self, n: usize) -> usize {
        self.dims
            .iter()
            .filter(|((p, q), _)| *p as i64 + q == n as i64)
            .map(|(_, d)| d)
            .sum()
    }
}

pub struct SpectralSequence<'a, F: Field> {
    pub fc: &'a FilteredComplex<F>,
    /// largest total degree with trustworthy entries (needs a differential
    /// out of it, so at most top_degree - 1).
    pub deg_max: usize,
}

impl<'a, F: Field> SpectralSequence<'a, F> {
    pub fn new(fc: &'a FilteredComplex<F>, deg_max: usize) -> Self {
        assert!(deg_max < fc.complex.top_degree(), "top degree has no outgoing differential");
        SpectralSequence { fc, deg_max }
    }

    fn ring(&self) -> F {
        self.fc.complex.ring.clone()
    }

    fn group_rank(&self, n: i64) -> usize {
        if n < 0 || n as usize > self.fc.complex.top_degree() {
            0
        } else {
            self.fc.complex.ranks[n as usize]
        }
    }

    /// Basis of F^p C^n; p clamps below to 0, above to zero space.
    fn f_basis(&self, p: i64, n: i64) -> Mat<F> {
        let rank = self.group_rank(n);
        if rank == 0 {
            return Mat::zero(self.ring(), 0, 0);
        }
        if p <= 0 {
            return self.fc.filt[0][n as usize].clone();
        }
        if p as usize > self.fc.p_max() {
            return Mat::zero(self.ring(), rank, 0);
        }
        self.fc.filt[p as usize][n as usize].clone()
    }

    /// Z_r^{p,q} = { x in F^p C^{p+q} : dx in F^{p+r} C^{p+q+1} }.
    pub fn cycles(&self, r: i64, p: i64, q: i64) -> Mat<F> {
        let ring = self.ring();
        let n = p + q;
        let a = self.f_basis(p, n);
        if a.cols == 0 {
            return a;
        }
        let n = n as usize;
        if n >= self.fc.complex.top_degree() {
            panic!("cycles requested above deg_max");
        }
        let da = self.fc.complex.d[n].matmul(&a);
        let b = self.f_basis(p + r, (n + 1) as i64);
        let combined = if b.cols == 0 { da.clone() } else { da.hstack(&b) };
        let k = ring.kernel_basis(&combined);
        let u_rows: Vec<usize> = (0..a.cols).collect();
        let u = k.select_rows(&u_rows);
        column_space_basis(&a.matmul(&u))
    }

    /// The subgroup killed in E_r^{p,q}: Z_{r-1}^{p+1,q-1} + d Z_{r-1}^{p-r+1,q+r-2}.
    pub fn boundaries(&self, r: i64, p: i64, q: i64) -> Mat<F> {
        let n = p + q;
        if r == 0 {
            return self.f_basis(p + 1, n);
        }
        let first = self.cycles(r - 1, p + 1, q - 1);
        let second = if n >= 1 {
            let z = self.cycles(r - 1, p - r + 1, q + r - 2);
            self.fc.complex.d[(n - 1) as usize].matmul(&z)
        } else {
            Mat::zero(self.ring(), self.group_rank(n), 0)
        };
        column_space_basis(&first.hstack(&second))
    }

    pub fn entry_dim(&self, r: i64, p: i64, q: i64) -> usize {
        let ring = self.ring();
        let z = self.cycles(r, p, q);
        if z.cols == 0 {
            return 0;
        }
        let b = self.boundaries(r, p, q);
        ring.rank(&z) - ring.rank(&b)
    }

    /// Basis vectors of E_r^{p,q} as ambient cochains extending the killed
    /// subgroup, together with that subgroup's basis.
    pub fn entry_basis(&self, r: i64, p: i64, q: i64) -> (Mat<F>, Mat<F>) {
        let b = self.boundaries(r, p, q);
        let z = self.cycles(r, p, q);
        let ext = extend_basis(&self.ring(), &b, &z);
        let idx: Vec<usize> = (b.cols..ext.cols).collect();
        (ext.select_columns(&idx), b)
    }

    /// Matrix of d_r : E_r^{p,q} -> E_r^{p+r,q-r+1}, in the bases produced by
    /// `entry_basis`. None when either total degree leaves the valid range.
    pub fn differential(&self, r: i64, p: i64, q: i64) -> Option<Mat<F>> {
        let ring = self.ring();
        let n = p + q;
        if n < 0 || n as usize > self.deg_max || (n + 1) as usize > self.deg_max {
            return None;
        }
        let (src, _) = self.entry_basis(r, p, q);
        let (tgt, tgt_bnd) = self.entry_basis(r, p + r, q - r + 1);
        if src.cols == 0 || self.group_rank(n + 1) == 0 {
            return Some(Mat::zero(ring, tgt.cols, src.cols));
        }
        let image = self.fc.complex.d[n as usize].matmul(&src);
        let ambient = tgt.hstack(&tgt_bnd);
        let coords = ring
            .solve(&ambient, &image)
            .expect("d_r image must land in the target entry");
        let rows: Vec<usize> = (0..tgt.cols).collect();
        Some(coords.select_rows(&rows))
    }

    pub fn page(&self, r: usize) -> SpectralPage {
        let mut dims = BTreeMap::new();
        for p in 0..=self.fc.p_max() {
            for n in 0..=self.deg_max {
                let q = n as i64 - p as i64;
                let d = self.entry_dim(r as i64, p as i64, q);
                if d > 0 {
                    dims.insert((p, q), d);
                }
            }
        }
        SpectralPage { r: Some(r), dims }
    }

    fn infinity_entry(&self, p: i64, q: i64) -> usize {
        let ring = self.ring();
        let n = p + q;
        if n < 0 {
            return 0;
        }
        let z = |pp: i64, qq: i64| -> Mat<F> {
            // permanent cycles: x in F^pp with dx = 0
            let a = self.f_basis(pp, pp + qq);
            if a.cols == 0 {
                return a;
            }
            let da = self.fc.complex.d[(pp + qq) as usize].matmul(&a);
            let k = ring.kernel_basis(&da);
            column_space_basis(&a.matmul(&k))
        };
        let zpq = z(p, q);
        if zpq.cols == 0 {
            return 0;
        }
        // boundaries reaching F^p: d(C^{n-1}) ∩ F^p, plus deeper permanent cycles
        let deeper = z(p + 1, q - 1);
        let hit = if n >= 1 {
            let d_prev = &self.fc.complex.d[(n - 1) as usize];
            let fp = self.f_basis(p, n);
            intersect(&ring, d_prev, &fp)
        } else {
            Mat::zero(ring.clone(), self.group_rank(n), 0)
        };
        let killed = column_space_basis(&deeper.hstack(&hit));
        ring.rank(&zpq) - ring.rank(&killed)
    }

    pub fn infinity(&self) -> SpectralPage {
        let mut dims = BTreeMap::new();
        for p in 0..=self.fc.p_max() {
            for n in 0..=self.deg_max {
                let q = n as i64 - p as i64;
                let d = self.infinity_entry(p as i64, q);
                if d > 0 {
                    dims.insert((p, q), d);
                }
            }
        }
        SpectralPage { r: None, dims }
    }

    /// Σ_{p+q=n} dim E_∞^{p,q} compared against dim H^n for all valid n.
    pub fn converges(&self) -> bool {
        let einf = self.infinity();
        (0..=self.deg_max).all(|n| {
            let h = cohomology(&self.fc.complex, n).rank;
            einf.total_dim(n) == h
        })
    }
}

/// Basis of (column span of A) ∩ (column span of B).
pub fn intersect<F: Field>(ring: &F, a: &Mat<F>, b: &Mat<F>) -> Mat<F> {
    if a.cols == 0 || b.cols == 0 {
        return Mat::zero(ring.clone(), a.rows, 0);
    }
    let combined = a.hstack(&b.neg());
    let k = ring.kernel_basis(&combined);
    let u_rows: Vec<usize> = (0..a.cols).collect();
    let u = k.select_rows(&u_rows);
    column_space_basis(&a.matmul(&u))
}

/// Dimensions of the homology of page r at (p,q): ker d_r / im d_r. Used as
/// an independent route to the E_{r+1} dimensions.
pub fn page_homology_dim<F: Field>(
    ss: &SpectralSequence<F>,
    r: i64,
    p: i64,
    q: i64,
) -> Option<usize> {
    let ring = ss.ring();
    let out = ss.differential(r, p, q)?;
    let kernel_dim = out.cols - ring.rank(&out);
    let incoming_rank = if p - r >= 0 {
        let inc = ss.differential(r, p - r, q + r - 1)?;
        ring.rank(&inc)
    } else {
        0
    };
    Some(kernel_dim - incoming_rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{RatField, Ring};
    use rand::{Rng, SeedableRng};

    fn full_filtration(c: &FinCochainComplex<RatField>) -> Vec<Mat<RatField>> {
        c.ranks.iter().map(|&r| Mat::identity(RatField, r)).collect()
    }

    #[test]
    fn trivial_filtration_is_cohomology() {
        let f = RatField;
        // 0 -> Q -> Q^2 -> Q -> 0 with d0 = (1,1)^T, d1 = (1,-1), plus zero top
        let c = FinCochainComplex::new(
            f.clone(),
            vec![1, 2, 1, 0],
            vec![
                Mat::from_i64_rows(f.clone(), &[&[1], &[1]]),
                Mat::from_i64_rows(f.clone(), &[&[1, -1]]),
                Mat::zero(f.clone(), 0, 1),
            ],
        )
        .unwrap();
        let filt = vec![full_filtration(&c)];
        let fc = FilteredComplex::new(c, filt).unwrap();
        let ss = SpectralSequence::new(&fc, 2);
        let e1 = ss.page(1);
        for n in 0..=2usize {
            assert_eq!(e1.total_dim(n), cohomology(&fc.complex, n).rank);
        }
        assert_eq!(e1, SpectralPage { r: Some(1), ..ss.page(5) });
        assert!(ss.converges());
    }

    #[test]
    fn exact_complex_vanishes_at_infinity() {
        let f = RatField;
        let c = FinCochainComplex::new(
            f.clone(),
            vec![1, 2, 1, 0],
            vec![
                Mat::from_i64_rows(f.clone(), &[&[1], &[1]]),
                Mat::from_i64_rows(f.clone(), &[&[1, -1]]),
                Mat::zero(f.clone(), 0, 1),
            ],
        )
        .unwrap();
        // two-step filtration: F^1 = (0, span{(1,-1)}, all, 0)
        let f1 = vec![
            Mat::zero(f.clone(), 1, 0),
            Mat::from_i64_rows(f.clone(), &[&[1], &[-1]]),
            Mat::identity(f.clone(), 1),
            Mat::zero(f.clone(), 0, 0),
        ];
        let filt = vec![full_filtration(&c), f1];
        let fc = FilteredComplex::new(c, filt).unwrap();
        let ss = SpectralSequence::new(&fc, 2);
        let einf = ss.infinity();
        assert!(einf.dims.is_empty(), "exactness forces E_inf = 0, got {:?}", einf.dims);
        assert!(ss.converges());
    }

    /// Random complex with d*d = 0 via the kernel trick: each differential's
    /// columns are random combinations of the next kernel.
    fn random_complex(rng: &mut impl Rng, ranks: &[usize]) -> FinCochainComplex<RatField> {
        let f = RatField;
        let mut d: Vec<Mat<RatField>> = vec![];
        // build from the top down so that d_{n+1} d_n = 0 can be arranged
        let mut next: Option<Mat<RatField>> = None;
        for n in (0..ranks.len() - 1).rev() {
            let rows = ranks[n + 1];
            let cols = ranks[n];
            let m = match &next {
                None => {
                    let mut m = Mat::zero(f.clone(), rows, cols);
                    for i in 0..rows {
                        for j in 0..cols {
                            m.set(i, j, f.from_i64(rng.gen_range(-2i64..=2)));
                        }
                    }
                    m
                }
                Some(up) => {
                    let k = f.kernel_basis(up);
                    let mut mix = Mat::zero(f.clone(), k.cols, cols);
                    for i in 0..k.cols {
                        for j in 0..cols {
                            mix.set(i, j, f.from_i64(rng.gen_range(-2i64..=2)));
                        }
                    }
                    k.matmul(&mix)
                }
            };
            next = Some(m.clone());
            d.push(m);
        }
        d.reverse();
        FinCochainComplex::new(f, ranks.to_vec(), d).unwrap()
    }

    /// Total complex of A⊗B filtered by A-degree.
    fn tensor_filtered(
        a: &FinCochainComplex<RatField>,
        b: &FinCochainComplex<RatField>,
    ) -> FilteredComplex<RatField> {
        let f = RatField;
        let ta = a.top_degree();
        let tb = b.top_degree();
        let top = ta + tb;
        // basis of C^n: blocks (p, i, j) ordered by p, i in A^p, j in B^{n-p}
        let block = |p: usize, n: usize| -> usize {
            if p > n || n - p > tb {
                0
            } else {
                a.ranks[p] * b.ranks[n - p]
            }
        };
        let offset = |p: usize, n: usize| -> usize { (0..p).map(|s| block(s, n)).sum() };
        let ranks: Vec<usize> = (0..=top).map(|n| (0..=n.min(ta)).map(|p| block(p, n)).sum()).collect();
        let mut d = vec![];
        for n in 0..top {
            let mut m = Mat::zero(f.clone(), ranks[n + 1], ranks[n]);
            for p in 0..=n.min(ta) {
                let q = n - p;
                if block(p, n) == 0 {
                    continue;
                }
                let co = offset(p, n);
                for i in 0..a.ranks[p] {
                    for j in 0..b.ranks[q] {
                        let col = co + i * b.ranks[q] + j;
                        // d_A ⊗ 1 lands in block (p+1, n+1)
                        if p < ta && block(p + 1, n + 1) > 0 {
                            let ro = offset(p + 1, n + 1);
                            for i2 in 0..a.ranks[p + 1] {
                                let v = a.d[p].at(i2, i).clone();
                                if !f.is_zero(&v) {
                                    m.set(ro + i2 * b.ranks[q] + j, col, v);
                                }
                            }
                        }
                        // (-1)^p 1 ⊗ d_B lands in block (p, n+1)
                        if q < tb && block(p, n + 1) > 0 {
                            let ro = offset(p, n + 1);
                            let sign = if p % 2 == 0 { 1 } else { -1 };
                            for j2 in 0..b.ranks[q + 1] {
                                let v = f.mul(&f.from_i64(sign), b.d[q].at(j2, j));
                                if !f.is_zero(&v) {
                                    m.set(ro + j2 + i * b.ranks[q + 1], col, v);
                                }
                            }
                        }
                    }
                }
            }
            d.push(m);
        }
        let total = FinCochainComplex::new(f.clone(), ranks.clone(), d).unwrap();
        // F^s = blocks with p >= s
        let mut filt = vec![];
        for s in 0..=ta {
            let mut level = vec![];
            for n in 0..=top {
                let cols: Vec<usize> = (offset(s.min(n + 1), n)..ranks[n]).collect();
                let id = Mat::identity(f.clone(), ranks[n]);
                level.push(id.select_columns(&cols));
            }
            filt.push(level);
        }
        FilteredComplex::new(total, filt).unwrap()
    }

    #[test]
    fn random_tensor_convergence_and_page_recursion() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let a = random_complex(&mut rng, &[2, 2, 1]);
            let b = random_complex(&mut rng, &[2, 2]);
            let fc = tensor_filtered(&a, &b);
            let deg_max = fc.complex.top_degree() - 1;
            let ss = SpectralSequence::new(&fc, deg_max);
            assert!(ss.converges());
            // E_{r+1} from the subquotient formula vs homology of (E_r, d_r)
            for r in 1..=3i64 {
                for p in 0..=ss.fc.p_max() as i64 {
                    for n in 0..deg_max as i64 {
                        let q = n - p;
                        if let Some(h) = page_homology_dim(&ss, r, p, q) {
                            assert_eq!(
                                h,
                                ss.entry_dim(r + 1, p, q),
                                "page recursion mismatch at r={r} p={p} q={q}"
                            );
                        }
                    }
                }
            }
        }
    }
}
