//! Dense exact linear algebra over any [`Field`].
//!
//! Rank and determinant use fraction-free (Bareiss) elimination: every
//! division is by a previous pivot and is exact, which keeps intermediate
//! entries as minors of the input instead of letting numerators and
//! denominators grow freely. Solving and subspace bookkeeping use reduced
//! row echelon form.

use crate::scalar::Field;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    elems: Vec<T>,
}

impl<T: Field> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut elems = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            elems.extend(row);
        }
        Matrix { rows: r, cols: c, elems }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            elems: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = T::one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.elems[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.elems[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.elems[i * self.cols..(i + 1) * self.cols]
    }

    pub fn into_rows(self) -> Vec<Vec<T>> {
        let cols = self.cols;
        let mut rows = Vec::with_capacity(self.rows);
        let mut it = self.elems.into_iter();
        for _ in 0..self.rows {
            rows.push(it.by_ref().take(cols).collect());
        }
        rows
    }

    pub fn transpose(&self) -> Matrix<T> {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.get_mut(j, i) = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a.clone() * other.get(k, j).clone();
                    let cur = out.get(i, j).clone();
                    *out.get_mut(i, j) = cur + add;
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.elems.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    /// Fraction-free forward elimination in place.
    /// Returns (rank, determinant-of-leading-square-part if square).
    fn bareiss(&mut self) -> (usize, T) {
        let mut prev = T::one();
        let mut sign_flip = false;
        let mut rank = 0usize;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot_row) = (rank..self.rows).find(|&r| !self.get(r, col).is_zero())
            else {
                continue;
            };
            if pivot_row != rank {
                self.swap_rows(rank, pivot_row);
                sign_flip = !sign_flip;
            }
            let pivot = self.get(rank, col).clone();
            for i in (rank + 1)..self.rows {
                let head = self.get(i, col).clone();
                let head_zero = head.is_zero();
                for j in 0..self.cols {
                    let cur_zero = self.get(i, j).is_zero();
                    if head_zero && cur_zero {
                        continue;
                    }
                    if head_zero {
                        let v = pivot.clone() * self.get(i, j).clone();
                        *self.get_mut(i, j) = v / prev.clone();
                        continue;
                    }
                    let sub = head.clone() * self.get(rank, j).clone();
                    let v = if cur_zero {
                        -sub
                    } else {
                        pivot.clone() * self.get(i, j).clone() - sub
                    };
                    *self.get_mut(i, j) = v / prev.clone();
                }
            }
            prev = pivot;
            rank += 1;
        }
        let det = if self.rows == self.cols && rank == self.rows {
            let d = prev;
            if sign_flip {
                -d
            } else {
                d
            }
        } else {
            T::zero()
        };
        (rank, det)
    }

    pub fn rank(&self) -> usize {
        self.clone().bareiss().0
    }

    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        if self.rows == 0 {
            return T::one();
        }
        self.clone().bareiss().1
    }

    /// Reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, col).is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = T::one() / self.get(r, col).clone();
            for j in 0..self.cols {
                let v = self.get(r, j).clone() * inv.clone();
                *self.get_mut(r, j) = v;
            }
            for i in 0..self.rows {
                if i == r || self.get(i, col).is_zero() {
                    continue;
                }
                let factor = self.get(i, col).clone();
                for j in 0..self.cols {
                    let v = self.get(i, j).clone()
                        - factor.clone() * self.get(r, j).clone();
                    *self.get_mut(i, j) = v;
                }
            }
            pivots.push(col);
            r += 1;
        }
        pivots
    }

    /// One exact solution of A·x = b, or None when inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *aug.get_mut(i, j) = self.get(i, j).clone();
            }
            *aug.get_mut(i, self.cols) = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // a pivot in the augmented column: inconsistent
        }
        let mut x = vec![T::zero(); self.cols];
        for (r, &col) in pivots.iter().enumerate() {
            x[col] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    /// Basis of the right nullspace {x : A·x = 0}.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let rank = pivots.len();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![T::zero(); self.cols];
            v[free] = T::one();
            for (r, &col) in pivots.iter().enumerate().take(rank) {
                v[col] = -m.get(r, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Exact inverse; None if singular.
    pub fn inverse(&self) -> Option<Matrix<T>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.get_mut(i, j) = self.get(i, j).clone();
            }
            *aug.get_mut(i, n + i) = T::one();
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(r, &c)| r != c) {
            return None;
        }
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                *out.get_mut(i, j) = aug.get(i, n + j).clone();
            }
        }
        Some(out)
    }
}

/// Subspace of coordinate vectors maintained in reduced row echelon form.
/// Supports incremental insertion and exact membership tests.
#[derive(Clone, Debug)]
pub struct RowSpace<T> {
    cols: usize,
    rows: Vec<Vec<T>>,   // RREF rows, leading coefficient 1
    pivots: Vec<usize>,  // pivot column of each row
}

impl<T: Field> RowSpace<T> {
    pub fn new(cols: usize) -> Self {
        RowSpace {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_vectors<I: IntoIterator<Item = Vec<T>>>(cols: usize, vecs: I) -> Self {
        let mut s = RowSpace::new(cols);
        for v in vecs {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.rows
    }

    fn reduce(&self, mut v: Vec<T>) -> Vec<T> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.clone() - factor.clone() * r.clone();
                }
            }
        }
        v
    }

    /// Adds a vector; returns true when it enlarged the space.
    pub fn insert(&mut self, v: Vec<T>) -> bool {
        assert_eq!(v.len(), self.cols);
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = T::one() / v[p].clone();
        for x in v.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        // keep the existing rows reduced against the new one
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let factor = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    *x = x.clone() - factor.clone() * r.clone();
                }
            }
        }
        let at = self.pivots.iter().position(|&q| q > p).unwrap_or(self.rows.len());
        self.rows.insert(at, v);
        self.pivots.insert(at, p);
        true
    }

    pub fn contains(&self, v: &[T]) -> bool {
        assert_eq!(v.len(), self.cols);
        self.reduce(v.to_vec()).iter().all(|x| x.is_zero())
    }
}
