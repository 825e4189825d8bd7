use super::ring::Ring;

/// Dense matrix over an exact ring. Row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<R: Ring> {
    pub ring: R,
    pub rows: usize,
    pub cols: usize,
    data: Vec<R::Elem>,
}

impl<R: Ring> Mat<R> {
    pub fn zero(ring: R, rows: usize, cols: usize) -> Self {
        let data = vec![ring.zero(); rows * cols];
        Mat { ring, rows, cols, data }
    }

    pub fn identity(ring: R, n: usize) -> Self {
        let mut m = Mat::zero(ring, n, n);
        for i in 0..n {
            let one = m.ring.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_rows(ring: R, rows: Vec<Vec<R::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        let data = rows.into_iter().flatten().collect();
        Mat { ring, rows: r, cols: c, data }
    }

    pub fn from_i64_rows(ring: R, rows: &[&[i64]]) -> Self {
        let conv: Vec<Vec<R::Elem>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| ring.from_i64(x)).collect())
            .collect();
        Mat::from_rows(ring, conv)
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &R::Elem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: R::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.ring.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.ring.is_one(self.at(i, j))
                    } else {
                        self.ring.is_zero(self.at(i, j))
                    }
                })
            })
    }

    pub fn matmul(&self, other: &Mat<R>) -> Mat<R> {
        assert_eq!(self.cols, other.rows, "shape mismatch in matmul");
        let mut out = Mat::zero(self.ring.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.ring.is_zero(self.at(i, k)) {
                    continue;
                }
                for j in 0..other.cols {
                    let t = self.ring.mul(self.at(i, k), other.at(k, j));
                    let v = self.ring.add(out.at(i, j), &t);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat<R>) -> Mat<R> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.ring.add(self.at(i, j), other.at(i, j));
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn sub(&self, other: &Mat<R>) -> Mat<R> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.ring.sub(self.at(i, j), other.at(i, j));
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn neg(&self) -> Mat<R> {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.ring.neg(self.at(i, j));
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat<R> {
        let mut out = Mat::zero(self.ring.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j).clone());
            }
        }
        out
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &Mat<R>) -> Mat<R> {
        assert_eq!(self.rows, other.rows);
        let mut out = Mat::zero(self.ring.clone(), self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.at(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.at(i, j).clone());
            }
        }
        out
    }

    /// Vertical concatenation [self; other].
    pub fn vstack(&self, other: &Mat<R>) -> Mat<R> {
        assert_eq!(self.cols, other.cols);
        let mut out = Mat::zero(self.ring.clone(), self.rows + other.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.at(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..self.cols {
                out.set(self.rows + i, j, other.at(i, j).clone());
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<R::Elem> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> Mat<R> {
        let mut out = Mat::zero(self.ring.clone(), self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, jj, self.at(i, j).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat<R> {
        let mut out = Mat::zero(self.ring.clone(), idx.len(), self.cols);
        for (ii, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                out.set(ii, j, self.at(i, j).clone());
            }
        }
        out
    }

    pub fn from_columns(ring: R, rows: usize, cols: Vec<Vec<R::Elem>>) -> Mat<R> {
        let mut out = Mat::zero(ring, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for i in 0..rows {
                out.set(i, j, col[i].clone());
            }
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += c * row[b]
    pub fn row_axpy(&mut self, a: usize, b: usize, c: &R::Elem) {
        for j in 0..self.cols {
            let t = self.ring.mul(c, self.at(b, j));
            let v = self.ring.add(self.at(a, j), &t);
            self.set(a, j, v);
        }
    }

    /// col[a] += c * col[b]
    pub fn col_axpy(&mut self, a: usize, b: usize, c: &R::Elem) {
        for i in 0..self.rows {
            let t = self.ring.mul(c, self.at(i, b));
            let v = self.ring.add(self.at(i, a), &t);
            self.set(i, a, v);
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &R::Elem) {
        for j in 0..self.cols {
            let v = self.ring.mul(self.at(i, j), c);
            self.set(i, j, v);
        }
    }

    pub fn scale_col(&mut self, j: usize, c: &R::Elem) {
        for i in 0..self.rows {
            let v = self.ring.mul(self.at(i, j), c);
            self.set(i, j, v);
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.ring.display(self.at(i, j))).collect();
            s.push_str(&format!("[{}]\n", row.join(", ")));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ring::IntRing;

    #[test]
    fn matmul_identity() {
        let a = Mat::from_i64_rows(IntRing, &[&[1, 2], &[3, 4]]);
        let id = Mat::identity(IntRing, 2);
        assert_eq!(a.matmul(&id), a);
        assert_eq!(id.matmul(&a), a);
    }

    #[test]
    fn stack_shapes() {
        let a = Mat::from_i64_rows(IntRing, &[&[1], &[2]]);
        let b = Mat::from_i64_rows(IntRing, &[&[3], &[4]]);
        assert_eq!(a.hstack(&b).cols, 2);
        assert_eq!(a.vstack(&b).rows, 4);
    }
}
