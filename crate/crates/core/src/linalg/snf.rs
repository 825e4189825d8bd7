use super::mat::Mat;
use super::ring::IntRing;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Smith normal form U * A * V = S with U, V unimodular and S diagonal,
/// diagonal entries nonnegative with d_i | d_{i+1}.
pub struct Snf {
    pub s: Mat<IntRing>,
    pub u: Mat<IntRing>,
    pub v: Mat<IntRing>,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows.min(self.s.cols);
        (0..n)
            .map(|i| self.s.at(i, i).clone())
            .filter(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().len()
    }
}

fn find_pivot(a: &Mat<IntRing>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let v = a.at(i, j).abs();
            if v.is_zero() {
                continue;
            }
            match &best {
                Some((_, _, b)) if *b <= v => {}
                _ => best = Some((i, j, v)),
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

pub fn smith_normal_form(a: &Mat<IntRing>) -> Snf {
    let mut s = a.clone();
    let mut u = Mat::identity(IntRing, a.rows);
    let mut v = Mat::identity(IntRing, a.cols);
    let n = s.rows.min(s.cols);

    for t in 0..n {
        'outer: loop {
            let Some((pi, pj)) = find_pivot(&s, t) else {
                return finish(s, u, v);
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            // clear column t below the pivot
            for i in t + 1..s.rows {
                if s.at(i, t).is_zero() {
                    continue;
                }
                let q = -(s.at(i, t).div_floor(s.at(t, t)));
                s.row_axpy(i, t, &q);
                u.row_axpy(i, t, &q);
                if !s.at(i, t).is_zero() {
                    // remainder became the smaller entry, restart with it as pivot
                    continue 'outer;
                }
            }
            // clear row t right of the pivot
            for j in t + 1..s.cols {
                if s.at(t, j).is_zero() {
                    continue;
                }
                let q = -(s.at(t, j).div_floor(s.at(t, t)));
                s.col_axpy(j, t, &q);
                v.col_axpy(j, t, &q);
                if !s.at(t, j).is_zero() {
                    continue 'outer;
                }
            }
            // force the pivot to divide the rest of the submatrix
            for i in t + 1..s.rows {
                for j in t + 1..s.cols {
                    if !s.at(i, j).mod_floor(s.at(t, t)).is_zero() {
                        let one = BigInt::from(1);
                        s.row_axpy(t, i, &one);
                        u.row_axpy(t, i, &one);
                        continue 'outer;
                    }
                }
            }
            break;
        }
    }
    finish(s, u, v)
}

fn finish(mut s: Mat<IntRing>, mut u: Mat<IntRing>, v: Mat<IntRing>) -> Snf {
    let n = s.rows.min(s.cols);
    for i in 0..n {
        if s.at(i, i).is_negative() {
            let m = BigInt::from(-1);
            s.scale_row(i, &m);
            u.scale_row(i, &m);
        }
    }
    Snf { s, u, v }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(a: &Mat<IntRing>) -> BigInt {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    if n == 0 {
        return BigInt::from(1);
    }
    let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| a.at(i, j).clone()).collect()).collect();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}
