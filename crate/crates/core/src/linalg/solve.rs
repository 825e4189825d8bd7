use super::mat::Mat;
use super::ring::{Field, IntRing, Ring};
use super::snf::smith_normal_form;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Isomorphism type of a finitely generated quotient module: free rank plus
/// elementary divisors (each > 1, each dividing the next). Over a field the
/// torsion list is always empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupShape {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl GroupShape {
    pub fn free(rank: usize) -> Self {
        GroupShape { rank, torsion: vec![] }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn render(&self) -> String {
        let mut parts = vec![];
        if self.rank == 1 {
            parts.push("Z".to_string());
        } else if self.rank > 1 {
            parts.push(format!("Z^{}", self.rank));
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Exact linear algebra shared by the integer and field pipelines.
pub trait LinAlg: Ring + Sized {
    /// Basis of { x : A x = 0 }, returned as columns. Over Z this is a basis
    /// of the kernel lattice (saturated).
    fn kernel_basis(&self, a: &Mat<Self>) -> Mat<Self>;

    /// Solve A X = B for X, exactly; None if no solution exists.
    fn solve(&self, a: &Mat<Self>, b: &Mat<Self>) -> Option<Mat<Self>>;

    fn rank(&self, a: &Mat<Self>) -> usize;

    /// Shape of R^ambient / column-span(y).
    fn quotient_shape(&self, ambient: usize, y: &Mat<Self>) -> GroupShape;

    fn inverse(&self, a: &Mat<Self>) -> Option<Mat<Self>> {
        if a.rows != a.cols {
            return None;
        }
        let id = Mat::identity(self.clone(), a.rows);
        let x = self.solve(a, &id)?;
        if a.matmul(&x) == id {
            Some(x)
        } else {
            None
        }
    }
}

impl LinAlg for IntRing {
    fn kernel_basis(&self, a: &Mat<Self>) -> Mat<Self> {
        let snf = smith_normal_form(a);
        let r = snf.rank();
        let idx: Vec<usize> = (r..a.cols).collect();
        snf.v.select_columns(&idx)
    }

    fn solve(&self, a: &Mat<Self>, b: &Mat<Self>) -> Option<Mat<Self>> {
        assert_eq!(a.rows, b.rows);
        let snf = smith_normal_form(a);
        let ub = snf.u.matmul(b);
        let r = snf.rank();
        let mut y = Mat::zero(IntRing, a.cols, b.cols);
        for i in 0..a.rows {
            for j in 0..b.cols {
                let rhs = ub.at(i, j);
                if i < r {
                    let d = snf.s.at(i, i);
                    let (q, rem) = rhs.div_rem(d);
                    if !rem.is_zero() {
                        return None;
                    }
                    y.set(i, j, q);
                } else if !rhs.is_zero() {
                    return None;
                }
            }
        }
        Some(snf.v.matmul(&y))
    }

    fn rank(&self, a: &Mat<Self>) -> usize {
        smith_normal_form(a).rank()
    }

    fn quotient_shape(&self, ambient: usize, y: &Mat<Self>) -> GroupShape {
        assert_eq!(y.rows, ambient);
        let snf = smith_normal_form(y);
        let diag = snf.diagonal();
        let torsion: Vec<BigInt> = diag.iter().filter(|d| !d.is_one()).cloned().collect();
        GroupShape { rank: ambient - diag.len(), torsion }
    }
}

/// In-place reduced row echelon form; returns the pivot columns.
pub fn rref<F: Field>(m: &mut Mat<F>) -> Vec<usize> {
    let ring = m.ring.clone();
    let mut pivots = vec![];
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&i| !ring.is_zero(m.at(i, col))) else {
            continue;
        };
        m.swap_rows(row, p);
        let inv = ring.inv(m.at(row, col)).expect("nonzero field element");
        m.scale_row(row, &inv);
        for i in 0..m.rows {
            if i != row && !ring.is_zero(m.at(i, col)) {
                let c = ring.neg(m.at(i, col));
                m.row_axpy(i, row, &c);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

impl<F: Field> LinAlg for F {
    fn kernel_basis(&self, a: &Mat<Self>) -> Mat<Self> {
        let mut m = a.clone();
        let pivots = rref(&mut m);
        let free: Vec<usize> = (0..a.cols).filter(|j| !pivots.contains(j)).collect();
        let mut out = Mat::zero(self.clone(), a.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, self.one());
            for (r, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, self.neg(m.at(r, fc)));
            }
        }
        out
    }

    fn solve(&self, a: &Mat<Self>, b: &Mat<Self>) -> Option<Mat<Self>> {
        assert_eq!(a.rows, b.rows);
        let mut aug = a.hstack(b);
        let pivots = rref(&mut aug);
        if pivots.iter().any(|&p| p >= a.cols) {
            return None;
        }
        let mut x = Mat::zero(self.clone(), a.cols, b.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, aug.at(r, a.cols + j).clone());
            }
        }
        Some(x)
    }

    fn rank(&self, a: &Mat<Self>) -> usize {
        let mut m = a.clone();
        rref(&mut m).len()
    }

    fn quotient_shape(&self, ambient: usize, y: &Mat<Self>) -> GroupShape {
        GroupShape::free(ambient - self.rank(y))
    }
}

/// Basis of the column space, as columns of the original matrix.
pub fn column_space_basis<F: Field>(a: &Mat<F>) -> Mat<F> {
    let mut m = a.clone();
    let pivots = rref(&mut m);
    a.select_columns(&pivots)
}

/// True when every column of `sub` lies in the column span of `space`.
pub fn contained_in_span<F: Field>(field: &F, sub: &Mat<F>, space: &Mat<F>) -> bool {
    field.solve(space, sub).is_some()
}

/// Columns of `candidates` that extend the span of `base`, appended to `base`.
pub fn extend_basis<F: Field>(field: &F, base: &Mat<F>, candidates: &Mat<F>) -> Mat<F> {
    let mut acc = base.clone();
    let mut rank = field.rank(&acc);
    for j in 0..candidates.cols {
        let trial = acc.hstack(&candidates.select_columns(&[j]));
        let r = field.rank(&trial);
        if r > rank {
            acc = trial;
            rank = r;
        }
    }
    acc
}
